#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bisectorlab/geometry.hpp"
#include "test_support.hpp"

using namespace bisectorlab;
using namespace bisectorlab::testing;

namespace {

using EL = CanonicalLine<ExactKernel>;

EL line(const std::string& a, const std::string& b, const std::string& c) { return EL{Q(a), Q(b), Q(c)}; }

// Rational points on a canonical line, for equidistance checks.
std::vector<EP> sample_line(const EL& l) {
  std::vector<EP> out;
  for (long t = -3; t <= 3; ++t) {
    if (sgn(l.b) != 0) {
      Rational x(t);
      Rational y = -(l.a * x + l.c) / l.b;
      out.push_back(make_point(x, y));
    } else {
      out.push_back(make_point(Rational(-l.c / l.a), Rational(t)));
    }
  }
  return out;
}

template <class Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST(Scalar, ParseAndPrint) {
  EXPECT_EQ(Q("3/4"), Rational(3, 4));
  EXPECT_EQ(Q("-7"), Rational(-7));
  EXPECT_EQ(to_string(Q("-3/4")), "-3/4");
  EXPECT_EQ(to_string(Q("12")), "12");
  EXPECT_EQ(error_of([] { parse_rational("2/4"); }), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_rational("1/0"); }), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_rational("1/-2"); }), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_rational("x"); }), ErrorCode::ParseError);
}

TEST(PerpendicularBisector, Examples) {
  EXPECT_EQ(perpendicular_bisector(P(0, 0), P(2, 0)), line("1", "0", "-1"));
  EXPECT_EQ(perpendicular_bisector(P(0, 0), P(0, 2)), line("0", "1", "-1"));
  const EL diag = perpendicular_bisector(P(0, 0), P(2, 2));
  EXPECT_EQ(diag, line("1", "1", "-2"));
  for (const auto& s : sample_line(diag)) {
    EXPECT_EQ(squared_distance(s, P(0, 0)), squared_distance(s, P(2, 2)));
  }
  EXPECT_EQ(error_of([] { perpendicular_bisector(P(1, 1), P(1, 1)); }), ErrorCode::DegeneratePair);
}

TEST(PerpendicularBisector, RandomProperties) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const EP a = random_point(rng);
    const EP b = random_point(rng);
    if (a == b) continue;
    const EL l = perpendicular_bisector(a, b);
    EXPECT_EQ(l, perpendicular_bisector(b, a));
    EXPECT_TRUE(l.a == 1 || (l.a == 0 && l.b == 1));
    EXPECT_EQ(reflect_over_line(a, l), b);
    for (const auto& s : sample_line(l)) EXPECT_EQ(squared_distance(s, a), squared_distance(s, b));
    // Off the line, the two distances differ.
    const EP off = make_point(Rational(a.x + b.x) / 2 + (b.x - a.x), Rational(a.y + b.y) / 2 + (b.y - a.y));
    EXPECT_FALSE(on_line(off, l));
    EXPECT_NE(squared_distance(off, a), squared_distance(off, b));
  }
}

TEST(LineThrough, Examples) {
  EXPECT_EQ(line_through(P(0, 0), P(1, 0)), line("0", "1", "0"));
  EXPECT_EQ(line_through(P(0, 0), P(0, 1)), line("1", "0", "0"));
  const EL l = line_through(P(0, 0), P(2, 1));
  EXPECT_EQ(l, line("1", "-2", "0"));
  EXPECT_TRUE(on_line(P(2, 1), l));
  EXPECT_TRUE(on_line(P(0, 0), l));
  EXPECT_EQ(error_of([] { line_through(P(3, 3), P(3, 3)); }), ErrorCode::DegeneratePair);
}

TEST(LineThrough, CanonicalFormIndependentOfChosenPair) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const EP a = random_point(rng);
    const EP d = random_point(rng, 9, 5);
    if (sgn(d.x) == 0 && sgn(d.y) == 0) continue;
    const Rational s = make_rational(trial % 7 + 1, 3);
    const EP b = make_point(Rational(a.x + d.x), Rational(a.y + d.y));
    const EP c = make_point(Rational(a.x - s * d.x), Rational(a.y - s * d.y));
    EXPECT_EQ(line_through(a, b), line_through(b, c));
    EXPECT_EQ(line_through(a, b), line_through(c, a));
  }
}

TEST(CircleThrough, Examples) {
  const auto c = circle_through(P(0, 0), P(2, 0), P(0, 2));
  EXPECT_EQ(c.cx, 1);
  EXPECT_EQ(c.cy, 1);
  EXPECT_EQ(c.r2, 2);
  const EP center = make_point(c.cx, c.cy);
  for (const auto& p : {P(0, 0), P(2, 0), P(0, 2)}) EXPECT_EQ(squared_distance(center, p), 2);

  EXPECT_EQ(error_of([] { circle_through(P(0, 0), P(1, 0), P(2, 0)); }), ErrorCode::Collinear);
  EXPECT_EQ(error_of([] { circle_through(P(0, 0), P(0, 0), P(2, 0)); }), ErrorCode::DegeneratePair);

  const auto unit = circle_through(P(1, 0), P(-1, 0), P(0, 1));
  EXPECT_EQ(unit, (CanonicalCircle<ExactKernel>{Q("0"), Q("0"), Q("1")}));
}

TEST(CircleThrough, PermutationInvariant) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const EP a = random_point(rng), b = random_point(rng), c = random_point(rng);
    CanonicalCircle<ExactKernel> ref;
    try {
      ref = circle_through(a, b, c);
    } catch (const Error&) {
      continue;
    }
    EXPECT_EQ(ref, circle_through(b, c, a));
    EXPECT_EQ(ref, circle_through(c, a, b));
    EXPECT_EQ(ref, circle_through(b, a, c));
    EXPECT_GT(ref.r2, 0);
    for (const auto& p : {a, b, c}) EXPECT_TRUE(on_circle(p, ref));
  }
}

TEST(SquaredDistance, Examples) {
  EXPECT_EQ(squared_distance(P(0, 0), P(3, 4)), 25);
  EXPECT_EQ(squared_distance(P("2/3", "-5"), P("2/3", "-5")), 0);
  EXPECT_EQ(squared_distance(P("1/2", "0"), P("0", "1/2")), Q("1/2"));
}

TEST(Reflect, Examples) {
  EXPECT_EQ(reflect_over_line(P(0, 0), line("1", "0", "-1")), P(2, 0));
  EXPECT_EQ(reflect_over_line(P(5, 5), line("1", "-1", "0")), P(5, 5));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const EP p = random_point(rng);
    const EP a = random_point(rng), b = random_point(rng);
    if (a == b) continue;
    const EL l = line_through(a, b);
    EXPECT_EQ(reflect_over_line(reflect_over_line(p, l), l), p);
    EXPECT_EQ(reflect_over_line(a, l), a);
  }
}

TEST(OnCurve, Examples) {
  EXPECT_TRUE(on_curve(P(1, 5), CurveKey<ExactKernel>(line("1", "0", "-1"))));
  const CurveKey<ExactKernel> c2(CanonicalCircle<ExactKernel>{Q("0"), Q("0"), Q("2")});
  const CurveKey<ExactKernel> c1(CanonicalCircle<ExactKernel>{Q("0"), Q("0"), Q("1")});
  EXPECT_TRUE(on_curve(P(1, 1), c2));
  EXPECT_FALSE(on_curve(P(1, 1), c1));
}

TEST(PointSet, RejectsDuplicatesAndIndexes) {
  EXPECT_EQ(error_of([] { set_of({P(0, 0), P(1, 1), P(0, 0)}); }), ErrorCode::DuplicatePoint);
  EXPECT_EQ(error_of([] { set_of({}); }), ErrorCode::EmptySet);
  const auto s = unit_square();
  EXPECT_EQ(s.index_of(P(1, 1)), 3u);
  EXPECT_FALSE(s.index_of(P(2, 2)).has_value());
  EXPECT_EQ(error_of([&] { s.at(4); }), ErrorCode::IndexOutOfRange);
  EXPECT_NE(s.fingerprint(), set_of({P(0, 0), P(1, 0), P(0, 1), P(1, 2)}).fingerprint());
}

TEST(QuantizedFloat, CanonicalFormsAndAudit) {
  const QuantizedFloatKernel k;
  using QP = Point<QuantizedFloatKernel>;
  const QP a = make_point(k, 0.0, 0.0);
  const QP b = make_point(k, 2.0, 2.0);
  const auto l = perpendicular_bisector(a, b, k);
  EXPECT_NEAR(l.a.value, 1.0, 1e-12);
  EXPECT_NEAR(l.b.value, 1.0, 1e-12);
  EXPECT_NEAR(l.c.value, -2.0, 1e-12);
  EXPECT_EQ(l, perpendicular_bisector(b, a, k));

  // Regular heptagon: the circumcircle through any three vertices agrees.
  std::vector<QP> v;
  for (int j = 0; j < 7; ++j) {
    const double t = 2 * std::numbers::pi * j / 7;
    v.push_back(make_point(k, std::cos(t), std::sin(t)));
  }
  const auto c = circle_through(v[0], v[2], v[5], k);
  EXPECT_EQ(c, circle_through(v[1], v[3], v[4], k));
  EXPECT_NEAR(c.r2.value, 1.0, 1e-12);

  // Keys a few cells apart fail the audit; well separated keys pass.
  std::vector<std::array<std::int64_t, 3>> close{{0, 0, 0}, {3, 0, 0}};
  EXPECT_FALSE(audit_separation(close).passed);
  EXPECT_EQ(audit_separation(close).closest, 3);
  std::vector<std::array<std::int64_t, 3>> far{{0, 0, 0}, {0, 11, 0}, {0, 0, 0}};
  EXPECT_TRUE(audit_separation(far).passed);
  EXPECT_EQ(error_of([&] { require_separated(audit_separation(close), "test"); }),
            ErrorCode::SeparationViolation);
  EXPECT_EQ(error_of([&] { k.store(1e12); }), ErrorCode::QuantizationRange);
}
