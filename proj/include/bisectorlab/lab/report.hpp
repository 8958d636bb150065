#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bisectorlab/io.hpp"
#include "bisectorlab/lab/generators.hpp"

namespace bisectorlab::lab {

using io::json;

struct BandRow {
  std::size_t k_low = 0;
  std::size_t k_high = 0;
  EnergyReport energy;
  std::int64_t incidences = 0;
};

struct RefinedEnergy {
  std::size_t K = 0;  // pairs with C(a, b) <= K
  EnergyReport energy;
};

struct HeavyCircleCheck {
  Rational epsilon;
  std::size_t on_circle = 0;
  Rational bound;  // min(eps, 1 - eps) * eps * n^2 / 4
  bool holds = false;
};

struct WsztCheck {
  NormTriple points;
  NormTriple lines;
  std::int64_t incidences = 0;
  Enclosure rhs;
  double ratio = 0.0;  // incidences / rhs.upper
  bool band_facts = false;
};

struct OracleCheck {
  std::optional<std::int64_t> energy;
  std::optional<std::int64_t> distinct;
  std::optional<std::int64_t> isoceles;
  std::vector<std::pair<std::size_t, std::int64_t>> refined;  // (K, energy)
  bool heaviness_checked = false;
};

/// Every invariant computed for one configuration. Absent optionals were
/// not requested or exceeded a size cap (listed in `skipped`).
struct InvariantReport {
  json config;  // generator spec, or the input source for loaded sets
  Backend backend = Backend::exact;
  Heaviness heaviness = Heaviness::Curves;
  std::size_t n = 0;

  std::optional<EnergyReport> bisectors;
  std::vector<RefinedEnergy> refined;
  std::optional<RichnessProfile> richness;
  std::optional<std::int64_t> delta_star;
  std::optional<std::int64_t> isoceles;
  std::optional<std::int64_t> isoceles_lower_form;
  std::optional<PinnedBoundCheck> pinned_bound;
  std::optional<std::int64_t> incidences;
  std::optional<std::int64_t> distinct_distances;
  std::optional<std::int64_t> distance_sum_squares;
  std::optional<std::size_t> m_cut;
  std::vector<BandRow> bands;
  std::optional<WsztCheck> wszt;
  std::optional<HeavyCircleCheck> heavy_circle;
  std::optional<SeparationAudit> audit;
  std::optional<OracleCheck> oracle;
  std::vector<std::string> skipped;
  std::vector<std::pair<std::string, double>> timings;
};

inline std::string config_key(const GeneratorSpec& s, std::size_t rep) {
  return std::string(to_string(s.family)) + "_n" + std::to_string(s.n) + "_s" + std::to_string(rep);
}

inline json spec_json(const GeneratorSpec& s) {
  json out = {{"family", std::string(to_string(s.family))}, {"n", s.n}, {"seed", std::to_string(s.seed)}};
  if (s.family == Family::heavy_circle_mix) out["epsilon"] = io::scalar(s.epsilon);
  if (s.family == Family::union_of_circles) out["circles"] = s.circles;
  if (s.family == Family::random_rational || s.family == Family::heavy_circle_mix) {
    out["num_bound"] = s.num_bound;
    out["den_bound"] = s.den_bound;
  }
  return out;
}

inline json to_json(const InvariantReport& r) {
  using io::count;
  using io::scalar;
  json out;
  out["config"] = r.config;
  out["backend"] = std::string(to_string(r.backend));
  out["heaviness"] = std::string(to_string(r.heaviness));
  out["n"] = r.n;
  if (r.bisectors) out["bisectors"] = io::to_json(*r.bisectors);
  if (!r.refined.empty()) {
    json rows = json::array();
    for (const auto& q : r.refined) {
      json row = io::to_json(q.energy);
      row["K"] = q.K;
      rows.push_back(std::move(row));
    }
    out["refined"] = std::move(rows);
  }
  if (r.richness) out["richness"] = io::to_json(*r.richness);
  if (r.delta_star) out["delta_star"] = count(*r.delta_star);
  if (r.isoceles) out["isoceles"] = count(*r.isoceles);
  if (r.isoceles_lower_form) out["isoceles_lower_form"] = count(*r.isoceles_lower_form);
  if (r.pinned_bound) out["pinned_bound"] = io::to_json(*r.pinned_bound);
  if (r.incidences) out["incidences"] = count(*r.incidences);
  if (r.distinct_distances) out["distinct_distances"] = count(*r.distinct_distances);
  if (r.distance_sum_squares) out["distance_sum_squares"] = count(*r.distance_sum_squares);
  if (r.m_cut) {
    json rows = json::array();
    for (const auto& b : r.bands) {
      json row = io::to_json(b.energy);
      row["k_low"] = b.k_low;
      row["k_high"] = b.k_high;
      row["incidences"] = count(b.incidences);
      rows.push_back(std::move(row));
    }
    out["bands"] = {{"m_cut", *r.m_cut}, {"bands", std::move(rows)}};
  }
  if (r.wszt) {
    const auto& w = *r.wszt;
    out["wszt"] = {{"point_norms", io::to_json(w.points)},
                   {"line_norms", io::to_json(w.lines)},
                   {"incidences", count(w.incidences)},
                   {"rhs_lower", scalar(w.rhs.lower)},
                   {"rhs_upper", scalar(w.rhs.upper)},
                   {"band_facts", w.band_facts}};
  }
  if (r.heavy_circle) {
    const auto& h = *r.heavy_circle;
    out["heavy_circle"] = {{"epsilon", scalar(h.epsilon)},
                           {"on_circle", h.on_circle},
                           {"bound", scalar(h.bound)},
                           {"holds", h.holds}};
  }
  json ratios = json::object();
  if (r.wszt) ratios["wszt"] = r.wszt->ratio;
  if (r.bisectors && r.bisectors->cs_lower_bound && r.bisectors->distinct > 0) {
    ratios["cauchy_schwarz"] = Rational(*r.bisectors->cs_lower_bound / Rational(r.bisectors->distinct)).get_d();
  }
  if (r.pinned_bound && sgn(r.pinned_bound->rhs) > 0) {
    ratios["pinned"] = Rational(Rational(r.pinned_bound->lhs) / r.pinned_bound->rhs).get_d();
  }
  out["ratios"] = std::move(ratios);
  if (r.audit) out["audit"] = io::to_json(*r.audit);
  if (r.oracle) {
    const auto& o = *r.oracle;
    json oj = json::object();
    if (o.energy) oj["energy"] = count(*o.energy);
    if (o.distinct) oj["distinct"] = count(*o.distinct);
    if (o.isoceles) oj["isoceles"] = count(*o.isoceles);
    json rows = json::array();
    for (const auto& [K, e] : o.refined) rows.push_back({{"K", K}, {"energy", count(e)}});
    oj["refined"] = std::move(rows);
    oj["heaviness_checked"] = o.heaviness_checked;
    out["oracle"] = std::move(oj);
  }
  out["skipped"] = r.skipped;
  if (!r.timings.empty()) {
    json t = json::object();
    for (const auto& [name, secs] : r.timings) t[name] = secs;
    out["timings"] = std::move(t);
  }
  return out;
}

namespace detail {

inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

/// Two columns, `field,value`, one row per scalar of the JSON report.
inline std::string to_csv(const InvariantReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(to_json(r), "", rows);
  std::ostringstream out;
  out << "field,value\n";
  for (const auto& [k, v] : rows) out << detail::csv_field(k) << ',' << detail::csv_field(v) << '\n';
  return out.str();
}

// Structural check of a serialized report against the published schema
// (schemas/invariant_report.schema.json). Returns the first problem found.
inline std::optional<std::string> validate_report(const json& j) {
  auto is_count = [](const json& v) {
    if (!v.is_string()) return false;
    const auto s = v.get<std::string>();
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && s[i] == '-' && s.size() > 1))) return false;
    }
    return true;
  };
  auto is_scalar = [&](const json& v) {
    if (!v.is_string()) return false;
    try {
      (void)parse_rational(v.get<std::string>());
      return true;
    } catch (const Error&) {
      // qfloat scalars are decimal strings
      std::istringstream in(v.get<std::string>());
      double d;
      return static_cast<bool>(in >> d) && in.eof();
    }
  };
  auto energy_ok = [&](const json& e) {
    return e.is_object() && is_count(e.value("distinct", json())) && is_count(e.value("energy", json())) &&
           is_count(e.value("pair_count", json())) &&
           (e.value("cs_lower_bound", json()).is_null() || is_scalar(e["cs_lower_bound"]));
  };
  if (!j.is_object()) return "report is not an object";
  for (const char* key : {"config", "backend", "heaviness", "n", "ratios", "skipped"}) {
    if (!j.contains(key)) return std::string("missing ") + key;
  }
  const auto& c = j["config"];
  if (!c.is_object()) return "bad config";
  if (c.contains("family")) {
    if (!c["family"].is_string() || !c.value("n", json()).is_number_unsigned() || !is_count(c.value("seed", json()))) {
      return "bad config";
    }
    try {
      (void)parse_family(c["family"].get<std::string>());
    } catch (const Error&) {
      return "unknown family";
    }
  }
  if (j["backend"] != "exact" && j["backend"] != "qfloat") return "bad backend";
  if (j["heaviness"] != "curves" && j["heaviness"] != "circles") return "bad heaviness";
  if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() < 2) return "bad n";
  if (j.contains("bisectors") && !energy_ok(j["bisectors"])) return "bad bisectors";
  if (j.contains("refined")) {
    for (const auto& row : j["refined"]) {
      if (!energy_ok(row) || !row.value("K", json()).is_number_unsigned()) return "bad refined row";
    }
  }
  for (const char* key : {"delta_star", "isoceles", "isoceles_lower_form", "incidences", "distinct_distances",
                          "distance_sum_squares"}) {
    if (j.contains(key) && !is_count(j[key])) return std::string("bad ") + key;
  }
  if (j.contains("richness")) {
    const auto& r = j["richness"];
    if (!r.value("max_coverage", json()).is_number_unsigned() || !r.value("s", json()).is_array()) return "bad richness";
    for (const auto& row : r["s"]) {
      if (!row.value("k", json()).is_number_unsigned()) return "bad richness row";
      for (const char* key : {"s", "s_eq", "lines", "circles"}) {
        if (!is_count(row.value(key, json()))) return "bad richness row";
      }
    }
  }
  if (j.contains("pinned_bound")) {
    const auto& p = j["pinned_bound"];
    if (!is_count(p.value("lhs", json())) || !is_scalar(p.value("rhs", json())) || !p.value("holds", json()).is_boolean() ||
        !is_scalar(p.value("sound_rhs", json())) || !p.value("sound_holds", json()).is_boolean()) {
      return "bad pinned_bound";
    }
  }
  if (j.contains("bands")) {
    const auto& b = j["bands"];
    if (!b.value("m_cut", json()).is_number_unsigned() || !b.value("bands", json()).is_array()) return "bad bands";
    for (const auto& row : b["bands"]) {
      if (!energy_ok(row) || !row.value("k_low", json()).is_number_unsigned() ||
          !row.value("k_high", json()).is_number_unsigned() || !is_count(row.value("incidences", json()))) {
        return "bad band row";
      }
    }
  }
  if (j.contains("wszt")) {
    const auto& w = j["wszt"];
    for (const char* key : {"point_norms", "line_norms"}) {
      const auto& t = w.value(key, json());
      if (!is_count(t.value("l1", json())) || !is_count(t.value("l2sq", json())) || !is_count(t.value("linf", json()))) {
        return "bad wszt norms";
      }
    }
    if (!is_count(w.value("incidences", json())) || !is_scalar(w.value("rhs_lower", json())) ||
        !is_scalar(w.value("rhs_upper", json())) || !w.value("band_facts", json()).is_boolean()) {
      return "bad wszt";
    }
  }
  if (!j["ratios"].is_object()) return "bad ratios";
  for (const auto& [k, v] : j["ratios"].items()) {
    if (!v.is_number()) return "bad ratio " + k;
  }
  if (!j["skipped"].is_array()) return "bad skipped";
  return std::nullopt;
}

}  // namespace bisectorlab::lab
