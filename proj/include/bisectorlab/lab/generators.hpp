#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"

namespace bisectorlab::lab {

enum class Family { ngon, rational_circle, grid, random_rational, collinear, heavy_circle_mix, union_of_circles };

inline constexpr Family all_families[] = {Family::ngon,          Family::rational_circle,  Family::grid,
                                          Family::random_rational, Family::collinear, Family::heavy_circle_mix,
                                          Family::union_of_circles};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::ngon: return "ngon";
    case Family::rational_circle: return "rational_circle";
    case Family::grid: return "grid";
    case Family::random_rational: return "random_rational";
    case Family::collinear: return "collinear";
    case Family::heavy_circle_mix: return "heavy_circle_mix";
    case Family::union_of_circles: return "union_of_circles";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  for (Family f : all_families) {
    if (to_string(f) == s) return f;
  }
  fail(ErrorCode::InvalidConfig, "unknown family '" + std::string(s) + "'");
}

/// Families whose output depends on the seed.
inline bool seeded(Family f) {
  return f == Family::rational_circle || f == Family::random_rational || f == Family::heavy_circle_mix ||
         f == Family::union_of_circles;
}

enum class Backend { exact, qfloat };

inline std::string_view to_string(Backend b) { return b == Backend::exact ? "exact" : "qfloat"; }

inline Backend parse_backend(std::string_view s) {
  if (s == "exact") return Backend::exact;
  if (s == "qfloat") return Backend::qfloat;
  fail(ErrorCode::InvalidConfig, "unknown backend '" + std::string(s) + "'");
}

struct GeneratorSpec {
  Family family = Family::random_rational;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Rational epsilon{1, 2};  // heavy_circle_mix: fraction of points on the circle
  std::size_t circles = 2;  // union_of_circles
  long num_bound = 10000;   // random_rational coordinates: |num| <= num_bound
  long den_bound = 100;     //                               1 <= den <= den_bound
};

/// Uniform integer in [lo, hi] by rejection, identical on every standard library.
inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<long>(v % span);
}

inline Rational random_rational(std::mt19937_64& rng, long num_bound, long den_bound) {
  return make_rational(uniform(rng, -num_bound, num_bound), uniform(rng, 1, den_bound));
}

/// ceil(eps * n) for a rational eps.
inline std::size_t ceil_fraction(const Rational& eps, std::size_t n) {
  Rational v = eps * Rational(static_cast<long>(n));
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return static_cast<std::size_t>(q.get_ui());
}

namespace detail {

class Collector {
 public:
  explicit Collector(std::size_t n) : n_(n), budget_(200 * n + 1000) { pts_.reserve(n); }

  bool full() const { return pts_.size() >= n_; }
  std::size_t size() const { return pts_.size(); }

  /// false when the point was a duplicate.
  bool add(Point<ExactKernel> p) {
    if (budget_-- == 0) {
      fail(ErrorCode::DuplicatePoint, "generator could not find " + std::to_string(n_) + " distinct points");
    }
    if (!seen_.insert(p).second) return false;
    pts_.push_back(std::move(p));
    return true;
  }

  std::vector<Point<ExactKernel>> take() { return std::move(pts_); }

 private:
  std::size_t n_;
  std::size_t budget_;
  std::vector<Point<ExactKernel>> pts_;
  std::unordered_set<Point<ExactKernel>, GeomHash> seen_;
};

// ((1 - t^2) / (1 + t^2), 2t / (1 + t^2)) scaled by r and shifted to c.
inline Point<ExactKernel> circle_point(const Rational& t, const Rational& cx, const Rational& cy, const Rational& r) {
  const Rational d = 1 + t * t;
  return make_point(Rational(cx + r * (1 - t * t) / d), Rational(cy + r * 2 * t / d));
}

}  // namespace detail

inline constexpr long circle_radius = 50;

/// Exact point sets. ngon has irrational coordinates and needs the qfloat
/// backend.
inline PointSet<ExactKernel> generate_exact(const GeneratorSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 2) fail(ErrorCode::InvalidConfig, "generators need n >= 2");
  std::mt19937_64 rng(spec.seed);
  detail::Collector out(n);
  const Rational zero(0);
  const Rational r(circle_radius);
  switch (spec.family) {
    case Family::ngon:
      fail(ErrorCode::BackendMismatch, "ngon has irrational coordinates; use the qfloat backend");
    case Family::grid: {
      long side = 1;
      while (static_cast<std::size_t>(side * side) < n) ++side;
      for (long y = 0; !out.full(); ++y) {
        for (long x = 0; x < side && !out.full(); ++x) out.add(make_point(x, y));
      }
      break;
    }
    case Family::collinear:
      for (long j = 0; !out.full(); ++j) out.add(make_point(j, 0L));
      break;
    case Family::random_rational:
      while (!out.full()) {
        out.add(make_point(random_rational(rng, spec.num_bound, spec.den_bound),
                           random_rational(rng, spec.num_bound, spec.den_bound)));
      }
      break;
    case Family::rational_circle:
      while (!out.full()) out.add(detail::circle_point(random_rational(rng, 200, 50), zero, zero, Rational(1)));
      break;
    case Family::heavy_circle_mix: {
      if (spec.epsilon <= 0 || spec.epsilon > 1) fail(ErrorCode::InvalidConfig, "epsilon must lie in (0, 1]");
      const std::size_t heavy = ceil_fraction(spec.epsilon, n);
      while (out.size() < heavy) out.add(detail::circle_point(random_rational(rng, 200, 50), zero, zero, r));
      const CanonicalCircle<ExactKernel> circle{zero, zero, r * r};
      while (!out.full()) {
        auto p = make_point(random_rational(rng, 2 * circle_radius * 100, 100),
                            random_rational(rng, 2 * circle_radius * 100, 100));
        if (!on_circle(p, circle)) out.add(std::move(p));
      }
      break;
    }
    case Family::union_of_circles: {
      const std::size_t c = std::max<std::size_t>(1, spec.circles);
      // Unit circles centered 3 apart never meet.
      for (std::size_t j = 0; !out.full(); j = (j + 1) % c) {
        const Rational cx(static_cast<long>(3 * j));
        while (!out.add(detail::circle_point(random_rational(rng, 200, 50), cx, zero, Rational(1)))) {
        }
      }
      break;
    }
  }
  return PointSet<ExactKernel>(out.take());
}

struct QfloatSet {
  PointSet<QuantizedFloatKernel> set;
  SeparationAudit audit;  // of the point keys
};

inline QfloatSet generate_qfloat(const GeneratorSpec& spec, const QuantizedFloatKernel& k = {}) {
  if (spec.family != Family::ngon) {
    auto set = to_qfloat(generate_exact(spec), k);
    auto audit = audit_objects(set.points());
    return {std::move(set), audit};
  }
  if (spec.n < 2) fail(ErrorCode::InvalidConfig, "generators need n >= 2");
  std::vector<Point<QuantizedFloatKernel>> v;
  v.reserve(spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    const double a = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.n);
    v.push_back(make_point(k, std::cos(a), std::sin(a)));
  }
  PointSet<QuantizedFloatKernel> set(std::move(v), k);
  auto audit = audit_objects(set.points());
  return {std::move(set), audit};
}

}  // namespace bisectorlab::lab
