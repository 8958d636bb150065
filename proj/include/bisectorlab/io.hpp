#pragma once

// JSON readers and writers. Rationals travel as "p/q" strings (integers as
// "p"), counts as decimal strings, small sizes as plain numbers.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bisectorlab/bisectors.hpp"
#include "bisectorlab/curves.hpp"
#include "bisectorlab/distances.hpp"
#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"
#include "bisectorlab/wszt.hpp"

namespace bisectorlab::io {

using json = nlohmann::ordered_json;

inline json count(std::int64_t v) { return std::to_string(v); }
inline json count(const Integer& v) { return v.get_str(); }
inline json scalar(const Rational& q) { return to_string(q); }
inline json scalar(const Quantized& q) { return to_string(q); }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
}

// Loading ---------------------------------------------------------------------

/// A coordinate is an integer or a string "p/q" in lowest terms.
inline Rational parse_coordinate(const json& v) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Rational(Integer(std::to_string(v.get<std::uint64_t>())))
                                  : Rational(Integer(std::to_string(v.get<std::int64_t>())));
  }
  if (v.is_string()) return parse_rational(v.get<std::string>());
  fail(ErrorCode::ParseError, "coordinate must be an integer or a \"p/q\" string, got " + v.dump());
}

inline std::vector<Point<ExactKernel>> parse_points(const json& doc) {
  if (!doc.is_array()) fail(ErrorCode::ParseError, "point set must be a JSON array of [x, y]");
  std::vector<Point<ExactKernel>> pts;
  pts.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_array() || item.size() != 2) fail(ErrorCode::ParseError, "point must be [x, y], got " + item.dump());
    pts.push_back(make_point(parse_coordinate(item[0]), parse_coordinate(item[1])));
  }
  return pts;
}

/// Duplicate points are rejected by PointSet itself.
inline PointSet<ExactKernel> load_point_set(const json& doc) { return PointSet<ExactKernel>(parse_points(doc)); }

/// Float coordinates are accepted here since the backend is approximate anyway.
inline PointSet<QuantizedFloatKernel> load_point_set_qfloat(const json& doc, const QuantizedFloatKernel& k = {}) {
  if (!doc.is_array()) fail(ErrorCode::ParseError, "point set must be a JSON array of [x, y]");
  std::vector<Point<QuantizedFloatKernel>> pts;
  for (const auto& item : doc) {
    if (!item.is_array() || item.size() != 2) fail(ErrorCode::ParseError, "point must be [x, y], got " + item.dump());
    double c[2];
    for (int a = 0; a < 2; ++a) c[a] = item[a].is_number_float() ? item[a].get<double>() : parse_coordinate(item[a]).get_d();
    pts.push_back(make_point(k, c[0], c[1]));
  }
  return PointSet<QuantizedFloatKernel>(std::move(pts), k);
}

inline std::int64_t parse_weight(const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    Integer w;
    if (!parse_integer(v.get<std::string>(), w)) fail(ErrorCode::ParseError, "bad weight " + v.dump());
    if (!w.fits_slong_p()) fail(ErrorCode::ParseError, "weight out of range: " + v.dump());
    return w.get_si();
  }
  fail(ErrorCode::ParseError, "weight must be an integer, got " + v.dump());
}

struct WeightedInstance {
  WeightedPoints<ExactKernel> points;
  WeightedLines<ExactKernel> lines;
};

/// {"points": [[x, y, w], ...], "lines": [[a, b, c, w], ...]}; lines are
/// canonicalized on load, so two rows naming the same line are a duplicate.
inline WeightedInstance load_weighted_instance(const json& doc) {
  if (!doc.is_object() || !doc.contains("points") || !doc.contains("lines")) {
    fail(ErrorCode::ParseError, "weighted instance needs \"points\" and \"lines\"");
  }
  std::vector<std::pair<Point<ExactKernel>, std::int64_t>> pts;
  for (const auto& row : doc.at("points")) {
    if (!row.is_array() || row.size() != 3) fail(ErrorCode::ParseError, "weighted point must be [x, y, w]");
    pts.emplace_back(make_point(parse_coordinate(row[0]), parse_coordinate(row[1])), parse_weight(row[2]));
  }
  std::vector<std::pair<CanonicalLine<ExactKernel>, std::int64_t>> lines;
  for (const auto& row : doc.at("lines")) {
    if (!row.is_array() || row.size() != 4) fail(ErrorCode::ParseError, "weighted line must be [a, b, c, w]");
    const Rational a = parse_coordinate(row[0]);
    const Rational b = parse_coordinate(row[1]);
    if (sgn(a) == 0 && sgn(b) == 0) fail(ErrorCode::ParseError, "line with a = b = 0");
    lines.emplace_back(canonical_line<ExactKernel>(a, b, parse_coordinate(row[2])), parse_weight(row[3]));
  }
  return {WeightedPoints<ExactKernel>(std::move(pts)), WeightedLines<ExactKernel>(std::move(lines))};
}

// Writing ---------------------------------------------------------------------

template <Kernel K>
json to_json(const Point<K>& p) {
  return json::array({scalar(p.x), scalar(p.y)});
}

template <Kernel K>
json to_json(const PointSet<K>& set) {
  json out = json::array();
  for (const auto& p : set) out.push_back(to_json(p));
  return out;
}

template <Kernel K>
json to_json(const CanonicalLine<K>& l) {
  return {{"type", "line"}, {"a", scalar(l.a)}, {"b", scalar(l.b)}, {"c", scalar(l.c)}};
}

template <Kernel K>
json to_json(const CanonicalCircle<K>& c) {
  return {{"type", "circle"}, {"cx", scalar(c.cx)}, {"cy", scalar(c.cy)}, {"r2", scalar(c.r2)}};
}

template <Kernel K>
json to_json(const CurveKey<K>& key) {
  return std::visit([](const auto& c) { return to_json(c); }, key);
}

template <Kernel K>
json to_json(const CurveTable<K>& table) {
  json out = json::array();
  for (const auto& e : table.entries()) out.push_back({{"curve", to_json(e.curve)}, {"point_indices", e.points}});
  return out;
}

inline json to_json(const EnergyReport& r) {
  json out = {{"distinct", count(r.distinct)}, {"energy", count(r.energy)}, {"pair_count", count(r.pair_count)}};
  out["cs_lower_bound"] = r.cs_lower_bound ? scalar(*r.cs_lower_bound) : json(nullptr);
  return out;
}

template <Kernel K>
json to_json(const MultiplicityMap<K>& m) {
  json out = json::array();
  for (const auto& [line, w] : m.entries()) out.push_back({{"line", to_json(line)}, {"w", count(w)}});
  return out;
}

template <Kernel K>
json to_json(const PinnedProfile<K>& prof) {
  json rows = json::array();
  for (const auto& row : prof.per_point) {
    json r = json::array();
    for (const auto& [d, m] : row) r.push_back(json::array({scalar(d), count(m)}));
    rows.push_back(std::move(r));
  }
  return {{"delta_star", count(prof.delta_star)}, {"per_point", std::move(rows)}};
}

template <Kernel K>
json to_json(const DistanceMultiplicities<K>& dm) {
  json m = json::array();
  for (const auto& [d, c] : dm.m) m.push_back(json::array({scalar(d), count(c)}));
  return {{"m", std::move(m)}, {"sum_squares", count(dm.sum_squares)}};
}

inline json to_json(const RichnessProfile& p) {
  json rows = json::array();
  for (std::size_t k = 2; k <= p.max_coverage; ++k) {
    rows.push_back({{"k", k},
                    {"s", count(p.s(k))},
                    {"s_eq", count(p.s_eq(k))},
                    {"lines", count(p.s_eq_lines(k))},
                    {"circles", count(p.s_eq_circles(k))}});
  }
  return {{"max_coverage", p.max_coverage}, {"s", std::move(rows)}};
}

inline json to_json(const NormTriple& t) {
  return {{"l1", count(t.l1)}, {"l2sq", count(t.l2sq)}, {"linf", count(t.linf)}};
}

inline json to_json(const SeparationAudit& a) {
  json out = {{"passed", a.passed}, {"keys", a.keys}, {"threshold", a.threshold}};
  out["closest"] = a.closest ? json(*a.closest) : json(nullptr);
  return out;
}

inline json to_json(const PinnedBoundCheck& c) {
  return {{"lhs", count(c.lhs)},
          {"rhs", scalar(c.rhs)},
          {"holds", c.holds},
          {"sound_rhs", scalar(c.sound_rhs)},
          {"sound_holds", c.sound_holds}};
}

}  // namespace bisectorlab::io
