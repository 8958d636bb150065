#include <gtest/gtest.h>

#include "bisectorlab/io.hpp"
#include "test_support.hpp"

using namespace bisectorlab;
using namespace bisectorlab::testing;
using io::json;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST(Load, PointSet) {
  const auto s = io::load_point_set(json::parse(R"([[0, 0], ["1/2", -3], ["-7/3", "4"]])"));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1], P("1/2", "-3"));
  EXPECT_EQ(s[2], P("-7/3", "4"));
}

TEST(Load, Rejects) {
  EXPECT_EQ(code_of([] { io::load_point_set(json::parse(R"([[0, 0], [0, 0]])")); }), ErrorCode::DuplicatePoint);
  EXPECT_EQ(code_of([] { io::load_point_set(json::parse(R"([[0.5, 0]])")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::load_point_set(json::parse(R"([["2/4", 0]])")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::load_point_set(json::parse(R"([[1, 2, 3]])")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::load_point_set(json::parse(R"({"x": 1})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::read_json_file("/nonexistent/file.json"); }), ErrorCode::ParseError);
}

TEST(Load, QfloatAcceptsFloats) {
  const auto s = io::load_point_set_qfloat(json::parse(R"([[0.5, 0], ["1/3", 2]])"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].x.value, 0.5, 1e-12);
  EXPECT_NEAR(s[1].x.value, 1.0 / 3, 1e-9);
}

TEST(Load, WeightedInstance) {
  const auto inst = io::load_weighted_instance(
      json::parse(R"({"points": [[0, 0, 2], ["1/2", 1, "5"]], "lines": [[0, 2, 0, 3], [1, 1, -1, 1]]})"));
  EXPECT_EQ(inst.points.size(), 2u);
  ASSERT_EQ(inst.lines.size(), 2u);
  EXPECT_EQ(weighted_incidence_count(inst.points, inst.lines), 6);
  // 2y = 0 and y = 0 are the same line.
  EXPECT_EQ(code_of([] {
              io::load_weighted_instance(json::parse(R"({"points": [], "lines": [[0, 2, 0, 1], [0, 1, 0, 1]]})"));
            }),
            ErrorCode::DuplicatePoint);
  EXPECT_EQ(code_of([] { io::load_weighted_instance(json::parse(R"({"points": [], "lines": [[0, 0, 1, 1]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::load_weighted_instance(json::parse(R"({"points": [[0, 0, 0]], "lines": []})")); }),
            ErrorCode::NonPositiveValue);
}

TEST(Write, RoundTripAndStrings) {
  const auto s = set_of({P("1/2", "-3"), P(0, 0), P("123456789012345678901/7", "1")});
  const json j = io::to_json(s);
  EXPECT_EQ(j.dump(), R"([["1/2","-3"],["0","0"],["123456789012345678901/7","1"]])");
  EXPECT_EQ(io::load_point_set(j).fingerprint(), s.fingerprint());

  const auto e = io::to_json(energy_report(multiplicity_map(unit_square())));
  EXPECT_EQ(e.dump(), R"({"distinct":"4","energy":"40","pair_count":"12","cs_lower_bound":"18/5"})");
}

TEST(Write, CurvesAndTables) {
  EXPECT_EQ(io::to_json(line_through(P(0, 0), P(1, 1))).dump(), R"({"type":"line","a":"1","b":"-1","c":"0"})");
  const auto table = build_curve_table(unit_square());
  const json t = io::to_json(table);
  ASSERT_EQ(t.size(), table.entries().size());
  for (const auto& row : t) {
    EXPECT_TRUE(row["curve"]["type"] == "line" || row["curve"]["type"] == "circle");
    EXPECT_GE(row["point_indices"].size(), 2u);
  }
  const json r = io::to_json(richness_profile(table));
  EXPECT_EQ(r["max_coverage"], 4);
  EXPECT_EQ(r["s"][0]["k"], 2);
}
