#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bisectorlab/bisectors.hpp"
#include "bisectorlab/curves.hpp"
#include "bisectorlab/distances.hpp"
#include "bisectorlab/io.hpp"
#include "bisectorlab/lab/generators.hpp"
#include "bisectorlab/lab/report.hpp"
#include "bisectorlab/oracles.hpp"
#include "bisectorlab/parallel.hpp"
#include "bisectorlab/wszt.hpp"

namespace bisectorlab::lab {

inline const std::vector<std::string>& invariant_names() {
  static const std::vector<std::string> names{"bisectors", "refined", "richness",  "pinned",
                                              "incidences", "bands",  "wszt",      "distances"};
  return names;
}

struct InvariantOptions {
  std::set<std::string> invariants{invariant_names().begin(), invariant_names().end()};
  std::vector<std::size_t> K{3, 4};
  std::size_t m_cut = 4;  // clamped to n
  Heaviness heaviness = Heaviness::Curves;
  bool oracle = false;
  oracles::Caps caps;
  bool record_timings = false;
  std::size_t workers = 1;

  bool wants(const std::string& name) const { return invariants.count(name) != 0; }
};

inline std::set<std::string> parse_invariants(const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (const auto& n : names) {
    if (std::find(invariant_names().begin(), invariant_names().end(), n) == invariant_names().end()) {
      fail(ErrorCode::InvalidConfig, "unknown invariant '" + n + "'");
    }
    out.insert(n);
  }
  return out;
}

inline Heaviness parse_heaviness(std::string_view s) {
  if (s == "curves") return Heaviness::Curves;
  if (s == "circles") return Heaviness::CirclesOnly;
  fail(ErrorCode::InvalidConfig, "heaviness must be 'curves' or 'circles', got '" + std::string(s) + "'");
}

namespace detail {

class Stopwatch {
 public:
  Stopwatch(bool on, std::vector<std::pair<std::string, double>>& out) : on_(on), out_(out) {}

  template <class Fn>
  decltype(auto) operator()(const char* name, Fn&& fn) {
    if (!on_) return fn();
    struct Record {
      Stopwatch& w;
      const char* name;
      std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
      ~Record() {
        w.out_.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
    } record{*this, name};
    return fn();
  }

 private:
  bool on_;
  std::vector<std::pair<std::string, double>>& out_;
};

template <Kernel K>
[[noreturn]] void oracle_mismatch(const json& config, const PointSet<K>& set, const std::string& what,
                                  const std::string& fast, const std::string& oracle) {
  const json dump = {{"check", what}, {"fast", fast}, {"oracle", oracle}, {"config", config}, {"points", io::to_json(set)}};
  fail(ErrorCode::OracleMismatch, what + ": fast path " + fast + ", oracle " + oracle + "\n" + dump.dump());
}

}  // namespace detail

/// Computes the requested invariants. With `o.oracle` set, every fast value
/// that has an oracle within its cap is recomputed by brute force, and any
/// disagreement throws OracleMismatch carrying the configuration.
template <Kernel K>
InvariantReport compute_invariants(const PointSet<K>& set, const InvariantOptions& o, json config = json::object()) {
  const std::size_t n = set.size();
  if (n < 2) fail(ErrorCode::InvalidConfig, "invariants need n >= 2");
  InvariantReport r;
  r.config = std::move(config);
  r.backend = K::exact ? Backend::exact : Backend::qfloat;
  r.heaviness = o.heaviness;
  r.n = n;
  detail::Stopwatch time(o.record_timings, r.timings);

  const bool need_map = o.wants("bisectors") || o.wants("incidences") || o.wants("wszt") || o.oracle;
  const bool need_heaviness = o.wants("refined") || o.wants("bands");
  MultiplicityMap<K> full;
  if (need_map) full = time("multiplicity_map", [&] { return multiplicity_map(set); });
  if (o.wants("bisectors")) r.bisectors = energy_report(full);

  std::optional<CurveTable<K>> table;
  if constexpr (!K::exact) {
    if (need_heaviness || o.wants("richness")) table = time("curve_table", [&] { return build_curve_table(set); });
  }
  HeavinessMatrix heavy;
  if (need_heaviness) {
    heavy = time("heaviness", [&] {
      if constexpr (K::exact) {
        return heaviness_matrix(set, o.heaviness, o.workers);
      } else {
        return heaviness_matrix(*table, o.heaviness);
      }
    });
  }
  std::vector<PairRefinement> refined_domains;
  if (o.wants("refined")) {
    for (std::size_t K_value : o.K) {
      if (K_value < 2) fail(ErrorCode::InvalidConfig, "K must be at least 2");
      refined_domains.push_back(refine_pairs(heavy, 2, K_value + 1));
      r.refined.push_back({K_value, energy_report(multiplicity_map(set, refined_domains.back()))});
    }
  }
  if (o.wants("richness")) {
    r.richness = time("richness", [&] {
      if constexpr (K::exact) {
        return richness_profile(set, o.workers);
      } else {
        return richness_profile(*table);
      }
    });
  }

  std::optional<PinnedProfile<K>> prof;
  if (o.wants("pinned") || o.oracle) prof = time("pinned_profile", [&] { return pinned_profile(set); });
  if (o.wants("pinned")) {
    r.delta_star = prof->delta_star;
    r.isoceles = isoceles_count(*prof);
    r.isoceles_lower_form = isoceles_lower_form(*prof);
    if (n >= 3) r.pinned_bound = pinned_lower_bound_check(set, *prof);
  }
  std::optional<std::int64_t> incidences;
  if (o.wants("incidences") || o.wants("wszt") || o.oracle) {
    incidences = time("incidences", [&] { return weighted_incidences_with_bisectors(set, full); });
  }
  if (o.wants("incidences")) r.incidences = incidences;
  if (o.wants("distances")) {
    const auto dm = time("distances", [&] { return distance_multiplicities(set); });
    r.distinct_distances = static_cast<std::int64_t>(dm.m.size());
    r.distance_sum_squares = dm.sum_squares;
  }
  if (o.wants("bands")) {
    r.m_cut = std::clamp<std::size_t>(o.m_cut, 2, n);
    for (const auto& band : time("bands", [&] { return banded_energy_sweep(set, heavy, *r.m_cut); })) {
      r.bands.push_back({band.k_low, band.k_high, band.report, weighted_incidences_with_bisectors(set, band.map)});
    }
  }
  if (o.wants("wszt")) {
    WsztCheck w;
    const auto points = unit_weights(set);
    const auto lines = weighted_lines(full);
    w.points = norms(points);
    w.lines = norms(lines);
    w.incidences = *incidences;
    w.rhs = wszt_rhs_enclosure(points, lines);
    w.ratio = Rational(Rational(w.incidences) / w.rhs.upper).get_d();
    w.band_facts = dyadic_band_facts_hold(points) && dyadic_band_facts_hold(lines);
    r.wszt = w;
  }
  if constexpr (!K::exact) {
    SeparationAudit audit = audit_objects(set.points());
    if (need_map) {
      std::vector<CanonicalLine<K>> lines;
      for (const auto& [l, w] : full.entries()) lines.push_back(l);
      audit.merge(audit_objects(lines));
    }
    if (table) audit.merge(audit_curve_table(*table));
    r.audit = audit;
  }

  if (o.oracle) {
    using detail::oracle_mismatch;
    OracleCheck oc;
    const auto& caps = o.caps;
    auto str = [](std::int64_t v) { return std::to_string(v); };
    if (n <= caps.energy) {
      oc.energy = time("oracle.energy", [&] { return oracles::energy_bruteforce(set, nullptr, caps); });
      const auto fast = bisector_energy(full);
      if (*oc.energy != fast) oracle_mismatch(r.config, set, "energy", str(fast), str(*oc.energy));
      for (std::size_t i = 0; i < refined_domains.size(); ++i) {
        const auto e = oracles::energy_bruteforce(set, &refined_domains[i], caps);
        oc.refined.emplace_back(r.refined[i].K, e);
        if (e != r.refined[i].energy.energy) {
          oracle_mismatch(r.config, set, "refined energy K=" + std::to_string(r.refined[i].K),
                          str(r.refined[i].energy.energy), str(e));
        }
      }
    } else {
      r.skipped.push_back("oracle.energy");
    }
    if (n <= caps.pairwise) {
      oc.distinct = time("oracle.distinct", [&] { return oracles::distinct_bisectors_pairwise(set, caps); });
      const auto fast = distinct_bisectors(full);
      if (*oc.distinct != fast) oracle_mismatch(r.config, set, "distinct bisectors", str(fast), str(*oc.distinct));
    } else {
      r.skipped.push_back("oracle.distinct");
    }
    if (n <= caps.isoceles) {
      oc.isoceles = time("oracle.isoceles", [&] { return oracles::isoceles_bruteforce(set, caps); });
      const auto fast = isoceles_count(*prof);
      if (*oc.isoceles != fast) oracle_mismatch(r.config, set, "isoceles", str(fast), str(*oc.isoceles));
      if (*incidences != fast) oracle_mismatch(r.config, set, "Delta = I(P,B)", str(*incidences), str(fast));
    } else {
      r.skipped.push_back("oracle.isoceles");
    }
    if (need_heaviness && n <= caps.heaviness) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const auto slow = oracles::heaviness_bruteforce(set, i, j, o.heaviness, caps);
          if (slow != heavy(i, j)) {
            oracle_mismatch(r.config, set, "heaviness (" + std::to_string(i) + ", " + std::to_string(j) + ")",
                            std::to_string(heavy(i, j)), std::to_string(slow));
          }
        }
      }
      oc.heaviness_checked = true;
    } else if (need_heaviness) {
      r.skipped.push_back("oracle.heaviness");
    }
    r.oracle = std::move(oc);
  }
  return r;
}

/// |B| >= min(eps, 1 - eps) * eps * n^2 / 4 for a heavy_circle_mix set.
inline HeavyCircleCheck heavy_circle_check(const GeneratorSpec& spec, std::int64_t distinct) {
  const auto exact = generate_exact(spec);
  const Rational r(circle_radius);
  const CanonicalCircle<ExactKernel> circle{Rational(0), Rational(0), r * r};
  HeavyCircleCheck h;
  h.epsilon = spec.epsilon;
  for (const auto& p : exact) h.on_circle += on_circle(p, circle) ? 1 : 0;
  const Rational one_minus = 1 - spec.epsilon;
  const Rational m = spec.epsilon < one_minus ? spec.epsilon : one_minus;
  const Rational n(static_cast<long>(spec.n));
  h.bound = m * spec.epsilon * n * n / 4;
  h.holds = Rational(distinct) >= h.bound;
  return h;
}

/// Generates one configuration and computes its report.
inline InvariantReport run_configuration(const GeneratorSpec& spec, Backend backend, const InvariantOptions& o) {
  InvariantReport r;
  if (backend == Backend::exact) {
    r = compute_invariants(generate_exact(spec), o, spec_json(spec));
  } else {
    r = compute_invariants(generate_qfloat(spec).set, o, spec_json(spec));
  }
  if (spec.family == Family::heavy_circle_mix && r.bisectors) r.heavy_circle = heavy_circle_check(spec, r.bisectors->distinct);
  return r;
}

// Sweeps ---------------------------------------------------------------------

struct Sweep {
  Family family = Family::random_rational;
  std::vector<std::size_t> sizes;
  Backend backend = Backend::exact;
  Rational epsilon{1, 2};
  std::size_t circles = 2;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t seeds_per_size = 1;  // repetitions for seeded families
  std::vector<Sweep> sweeps;
  InvariantOptions options;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of repetition `rep` of (family, n); independent of sweep order.
inline std::uint64_t job_seed(std::uint64_t base, Family f, std::size_t n, std::size_t rep) {
  std::uint64_t s = splitmix64(base ^ (static_cast<std::uint64_t>(f) + 1));
  s = splitmix64(s ^ n);
  return splitmix64(s ^ rep);
}

namespace detail {

inline void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      fail(ErrorCode::InvalidConfig, "unknown key '" + k + "' in " + where);
    }
  }
}

inline std::size_t get_size(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned()) fail(ErrorCode::InvalidConfig, std::string(key) + " must be a non-negative integer");
  return j[key].get<std::size_t>();
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const json& j) {
  using detail::get_size;
  if (!j.is_object()) fail(ErrorCode::InvalidConfig, "config must be a JSON object");
  detail::require_keys(j, {"seed", "seeds_per_size", "sweeps", "invariants", "K", "m_cut", "heaviness", "oracle", "caps",
                           "record_timings"},
                       "config");
  ExperimentConfig c;
  try {
    if (j.contains("seed")) c.seed = j["seed"].is_string() ? std::stoull(j["seed"].get<std::string>()) : j["seed"].get<std::uint64_t>();
    c.seeds_per_size = get_size(j, "seeds_per_size", 1);
    if (c.seeds_per_size == 0) fail(ErrorCode::InvalidConfig, "seeds_per_size must be positive");
    if (!j.contains("sweeps") || !j["sweeps"].is_array()) fail(ErrorCode::InvalidConfig, "config needs a 'sweeps' array");
    for (const auto& s : j["sweeps"]) {
      detail::require_keys(s, {"family", "sizes", "backend", "epsilon", "circles"}, "sweep");
      Sweep sw;
      sw.family = parse_family(s.at("family").get<std::string>());
      sw.sizes = s.at("sizes").get<std::vector<std::size_t>>();
      for (auto n : sw.sizes) {
        if (n < 2) fail(ErrorCode::InvalidConfig, "sizes must be at least 2");
      }
      sw.backend = s.contains("backend") ? parse_backend(s["backend"].get<std::string>())
                   : sw.family == Family::ngon ? Backend::qfloat
                                               : Backend::exact;
      if (s.contains("epsilon")) sw.epsilon = parse_rational(s["epsilon"].get<std::string>());
      sw.circles = get_size(s, "circles", 2);
      c.sweeps.push_back(std::move(sw));
    }
    auto& o = c.options;
    if (j.contains("invariants")) o.invariants = parse_invariants(j["invariants"].get<std::vector<std::string>>());
    if (j.contains("K")) o.K = j["K"].get<std::vector<std::size_t>>();
    o.m_cut = get_size(j, "m_cut", o.m_cut);
    if (j.contains("heaviness")) o.heaviness = parse_heaviness(j["heaviness"].get<std::string>());
    if (j.contains("oracle")) o.oracle = j["oracle"].get<bool>();
    if (j.contains("record_timings")) o.record_timings = j["record_timings"].get<bool>();
    if (j.contains("caps")) {
      const auto& caps = j["caps"];
      detail::require_keys(caps, {"energy", "isoceles", "pairwise", "heaviness"}, "caps");
      o.caps.energy = get_size(caps, "energy", o.caps.energy);
      o.caps.isoceles = get_size(caps, "isoceles", o.caps.isoceles);
      o.caps.pairwise = get_size(caps, "pairwise", o.caps.pairwise);
      o.caps.heaviness = get_size(caps, "heaviness", o.caps.heaviness);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  } catch (const std::logic_error& e) {
    fail(ErrorCode::InvalidConfig, std::string("bad seed: ") + e.what());
  }
  for (auto K : c.options.K) {
    if (K < 2) fail(ErrorCode::InvalidConfig, "K must be at least 2");
  }
  if (c.options.m_cut < 2) fail(ErrorCode::InvalidConfig, "m_cut must be at least 2");
  return c;
}

struct Job {
  std::string key;
  GeneratorSpec spec;
  Backend backend = Backend::exact;
};

inline std::vector<Job> experiment_jobs(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  std::set<std::string> keys;
  for (const auto& sw : cfg.sweeps) {
    for (std::size_t n : sw.sizes) {
      const std::size_t reps = seeded(sw.family) ? cfg.seeds_per_size : 1;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        GeneratorSpec spec;
        spec.family = sw.family;
        spec.n = n;
        spec.seed = seeded(sw.family) ? job_seed(cfg.seed, sw.family, n, rep) : 0;
        spec.epsilon = sw.epsilon;
        spec.circles = sw.circles;
        std::string key = config_key(spec, rep);
        if (sw.backend != (sw.family == Family::ngon ? Backend::qfloat : Backend::exact)) {
          key += "_" + std::string(to_string(sw.backend));
        }
        if (!keys.insert(key).second) fail(ErrorCode::InvalidConfig, "configuration " + key + " listed twice");
        jobs.push_back({std::move(key), spec, sw.backend});
      }
    }
  }
  return jobs;
}

struct ExperimentResult {
  std::vector<Job> jobs;
  std::vector<InvariantReport> reports;  // reports[i] belongs to jobs[i]
};

/// Jobs run on `workers` threads; each job is single-threaded and writes its
/// own slot, so the result does not depend on the worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t workers = default_workers()) {
  ExperimentResult out;
  out.jobs = experiment_jobs(cfg);
  out.reports.resize(out.jobs.size());
  InvariantOptions o = cfg.options;
  o.workers = 1;
  parallel_for(
      out.jobs.size(), [&](std::size_t i) { out.reports[i] = run_configuration(out.jobs[i].spec, out.jobs[i].backend, o); },
      workers);
  return out;
}

// Exponent fits ----------------------------------------------------------------

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square, in log space
  std::size_t points = 0;
};

/// Least-squares fit of log(value) against log(n).
inline ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) fail(ErrorCode::InsufficientData, "exponent fit needs at least 3 points");
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> logs;
  for (const auto& [n, v] : series) {
    if (!(n > 0) || !(v > 0)) fail(ErrorCode::NonPositiveValue, "exponent fit needs positive n and values");
    logs.emplace_back(std::log(n), std::log(v));
    sx += logs.back().first;
    sy += logs.back().second;
  }
  const double m = static_cast<double>(logs.size());
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) fail(ErrorCode::InsufficientData, "exponent fit needs at least two distinct sizes");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : logs) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  fit.points = logs.size();
  return fit;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << text;
}

inline std::optional<double> metric(const InvariantReport& r, const std::string& name) {
  auto d = [](std::optional<std::int64_t> v) -> std::optional<double> {
    return v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt;
  };
  if (name == "distinct_bisectors") return r.bisectors ? d(r.bisectors->distinct) : std::nullopt;
  if (name == "energy") return r.bisectors ? d(r.bisectors->energy) : std::nullopt;
  if (name == "isoceles") return d(r.isoceles);
  if (name == "incidences") return d(r.incidences);
  if (name == "distinct_distances") return d(r.distinct_distances);
  if (name == "delta_star") return d(r.delta_star);
  return std::nullopt;
}

}  // namespace detail

inline const std::vector<std::string>& fitted_metrics() {
  static const std::vector<std::string> m{"distinct_bisectors", "energy", "isoceles", "incidences",
                                          "distinct_distances", "delta_star"};
  return m;
}

/// Slopes of each metric against n, one row per (family, backend, metric).
/// Repetitions at one size are averaged before fitting.
inline std::string summary_csv(const ExperimentResult& result) {
  std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::vector<const InvariantReport*>>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t i = 0; i < result.jobs.size(); ++i) {
    const auto& job = result.jobs[i];
    std::pair<std::string, std::string> g{std::string(to_string(job.spec.family)), std::string(to_string(job.backend))};
    if (!groups.count(g)) order.push_back(g);
    groups[g][job.spec.n].push_back(&result.reports[i]);
  }
  std::string out = "family,backend,metric,points,slope,intercept,residual,status\n";
  for (const auto& g : order) {
    for (const auto& name : fitted_metrics()) {
      std::vector<std::pair<double, double>> series;
      bool missing = false;
      for (const auto& [n, reps] : groups[g]) {
        double sum = 0;
        for (const auto* r : reps) {
          const auto v = detail::metric(*r, name);
          if (!v) missing = true;
          sum += v.value_or(0);
        }
        series.emplace_back(static_cast<double>(n), sum / static_cast<double>(reps.size()));
      }
      if (missing) continue;
      out += g.first + "," + g.second + "," + name + "," + std::to_string(series.size()) + ",";
      try {
        const auto fit = fit_exponent(series);
        out += detail::fmt_double(fit.slope) + "," + detail::fmt_double(fit.intercept) + "," +
               detail::fmt_double(fit.residual) + ",ok\n";
      } catch (const Error& e) {
        out += ",,," + std::string(to_string(e.code())) + "\n";
      }
    }
  }
  return out;
}

/// <out>/<key>/report.json and report.csv per configuration, plus
/// <out>/summary.csv.
inline void write_sweep(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < result.jobs.size(); ++i) {
    const auto dir = out_dir / result.jobs[i].key;
    std::filesystem::create_directories(dir);
    detail::write_file(dir / "report.json", to_json(result.reports[i]).dump(2) + "\n");
    detail::write_file(dir / "report.csv", to_csv(result.reports[i]));
  }
  detail::write_file(out_dir / "summary.csv", summary_csv(result));
}

}  // namespace bisectorlab::lab
