#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bisectorlab/lab/experiment.hpp"

namespace bisectorlab::lab {

enum class Suite {
  all,
  proposition,
  shared_bisector,
  cs_chain,
  delta_identity,
  heavy_circle,
  band_partition,
  wszt_ratio,
  oracle_parity
};

inline constexpr Suite all_suites[] = {Suite::proposition,  Suite::shared_bisector, Suite::cs_chain,
                                       Suite::delta_identity, Suite::heavy_circle,  Suite::band_partition,
                                       Suite::wszt_ratio,   Suite::oracle_parity};

inline std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::all: return "all";
    case Suite::proposition: return "proposition";
    case Suite::shared_bisector: return "shared_bisector";
    case Suite::cs_chain: return "cs_chain";
    case Suite::delta_identity: return "delta_identity";
    case Suite::heavy_circle: return "heavy_circle";
    case Suite::band_partition: return "band_partition";
    case Suite::wszt_ratio: return "wszt_ratio";
    case Suite::oracle_parity: return "oracle_parity";
  }
  return "?";
}

inline Suite parse_suite(std::string_view s) {
  if (s == "all") return Suite::all;
  for (Suite x : all_suites) {
    if (to_string(x) == s) return x;
  }
  fail(ErrorCode::InvalidConfig, "unknown suite '" + std::string(s) + "'");
}

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t seeds = 100;  // repetitions of each seeded family per size
  std::vector<std::size_t> sizes{3, 4, 5, 6, 8, 12, 16, 24, 32, 40};
  std::vector<std::size_t> large_sizes{64, 128, 300};  // delta_identity only
  std::size_t large_seeds = 2;
  std::vector<std::size_t> K{3, 4};
  Heaviness heaviness = Heaviness::Curves;
  oracles::Caps caps;
  std::size_t shared_instances = 10000;
  std::vector<std::size_t> heavy_sizes{16, 32, 64};
  std::vector<std::size_t> wszt_sizes{8, 16, 32, 64, 128, 256};
  std::size_t wszt_seeds = 10;
  std::size_t workers = default_workers();
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failure_count = 0;
  std::vector<std::string> counterexamples;  // the first few failures
  std::vector<std::string> notes;
  double seconds = 0.0;

  bool passed() const { return failure_count == 0; }
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    for (const auto& s : suites) {
      if (!s.passed()) return false;
    }
    return true;
  }
};

inline json to_json(const SuiteResult& s) {
  return {{"suite", s.name},         {"passed", s.passed()},
          {"checks", s.checks},      {"failures", s.failure_count},
          {"counterexamples", s.counterexamples}, {"notes", s.notes}};
}

inline json to_json(const VerifyReport& r) {
  json suites = json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s));
  return {{"passed", r.passed()}, {"suites", std::move(suites)}};
}

// Battery -------------------------------------------------------------------

struct BatteryItem {
  std::string key;
  GeneratorSpec spec;
  Backend backend = Backend::exact;
};

/// Every family at every size; seeded families repeat `reps` times with
/// epsilon and circle count cycling through a few values.
inline std::vector<BatteryItem> battery(std::uint64_t seed, const std::vector<std::size_t>& sizes, std::size_t reps) {
  static const Rational epsilons[] = {make_rational(1, 2), make_rational(1, 4), make_rational(3, 4)};
  std::vector<BatteryItem> items;
  for (Family f : all_families) {
    for (std::size_t n : sizes) {
      const std::size_t count = seeded(f) ? reps : 1;
      for (std::size_t rep = 0; rep < count; ++rep) {
        GeneratorSpec s;
        s.family = f;
        s.n = n;
        s.seed = seeded(f) ? job_seed(seed, f, n, rep) : 0;
        s.epsilon = epsilons[rep % 3];
        s.circles = 1 + rep % 3;
        items.push_back({config_key(s, rep), s, f == Family::ngon ? Backend::qfloat : Backend::exact});
      }
    }
  }
  return items;
}

inline std::vector<BatteryItem> standard_battery(const VerifyOptions& o) { return battery(o.seed, o.sizes, o.seeds); }

namespace detail {

template <class Fn>
decltype(auto) with_set(const BatteryItem& item, Fn&& fn) {
  if (item.backend == Backend::exact) return fn(generate_exact(item.spec));
  return fn(generate_qfloat(item.spec).set);
}

struct Outcome {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void check(bool ok, const BatteryItem& item, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(item.key + ": " + what);
  }
};

inline constexpr std::size_t max_counterexamples = 20;

/// Runs `body(item, outcome)` over the items and folds the outcomes in item
/// order. An exception inside one item is a failure of that item.
template <class Body>
SuiteResult run_items(std::string name, const std::vector<BatteryItem>& items, std::size_t workers, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Outcome> outcomes(items.size());
  parallel_for(
      items.size(),
      [&](std::size_t i) {
        try {
          body(items[i], outcomes[i]);
        } catch (const std::exception& e) {
          outcomes[i].check(false, items[i], std::string("threw ") + e.what());
        }
      },
      workers);
  SuiteResult r;
  r.name = std::move(name);
  for (auto& o : outcomes) {
    r.checks += o.checks;
    r.failure_count += o.failures.size();
    for (auto& f : o.failures) {
      if (r.counterexamples.size() < max_counterexamples) r.counterexamples.push_back(std::move(f));
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string vs(std::int64_t fast, std::int64_t slow) {
  return "fast " + std::to_string(fast) + " vs oracle " + std::to_string(slow);
}

template <Kernel K>
HeavinessMatrix fast_heaviness(const PointSet<K>& set, Heaviness mode) {
  if constexpr (K::exact) {
    return heaviness_matrix(set, mode);
  } else {
    return heaviness_matrix(build_curve_table(set), mode);
  }
}

}  // namespace detail

// Suites ----------------------------------------------------------------------

/// |B| >= n whenever n > 2.
inline SuiteResult verify_proposition(const std::vector<BatteryItem>& items, std::size_t workers) {
  return detail::run_items("proposition", items, workers, [](const BatteryItem& item, detail::Outcome& out) {
    if (item.spec.n <= 2) return;
    detail::with_set(item, [&](const auto& set) {
      const auto b = distinct_bisectors(multiplicity_map(set));
      out.check(b >= static_cast<std::int64_t>(set.size()), item, "|B| = " + std::to_string(b) + " < n");
    });
  });
}

/// Delta = I(P, B) in exact integers.
inline SuiteResult verify_delta_identity(const std::vector<BatteryItem>& items, std::size_t workers) {
  return detail::run_items("delta_identity", items, workers, [](const BatteryItem& item, detail::Outcome& out) {
    detail::with_set(item, [&](const auto& set) {
      const auto delta = isoceles_count(set);
      const auto inc = weighted_incidences_with_bisectors(set, multiplicity_map(set));
      out.check(delta == inc, item, "Delta " + std::to_string(delta) + " != I(P,B) " + std::to_string(inc));
    });
  });
}

/// |B_Pi| * Q_Pi >= |Pi|^2 for the full pair set, each Pi_K and every band.
inline SuiteResult verify_cs_chain(const std::vector<BatteryItem>& items, const VerifyOptions& o) {
  return detail::run_items("cs_chain", items, o.workers, [&](const BatteryItem& item, detail::Outcome& out) {
    detail::with_set(item, [&](const auto& set) {
      const std::size_t n = set.size();
      auto check = [&](const EnergyReport& r, const std::string& which) {
        out.check(r.cauchy_schwarz_holds(), item,
                  which + ": " + std::to_string(r.distinct) + " * " + std::to_string(r.energy) + " < " +
                      std::to_string(r.pair_count) + "^2");
      };
      check(energy_report(multiplicity_map(set)), "full");
      const auto heavy = detail::fast_heaviness(set, o.heaviness);
      for (std::size_t K : o.K) {
        check(energy_report(multiplicity_map(set, refine_pairs(heavy, 2, K + 1))), "Pi_" + std::to_string(K));
      }
      for (std::size_t m_cut : {std::size_t{2}, std::min<std::size_t>(4, n)}) {
        for (const auto& band : banded_energy_sweep(set, heavy, m_cut)) {
          check(band.report, "band [" + std::to_string(band.k_low) + ", " + std::to_string(band.k_high) + ")");
        }
      }
    });
  });
}

/// The bands partition the ordered pairs and the incidences with B.
inline SuiteResult verify_band_partition(const std::vector<BatteryItem>& items, const VerifyOptions& o) {
  return detail::run_items("band_partition", items, o.workers, [&](const BatteryItem& item, detail::Outcome& out) {
    detail::with_set(item, [&](const auto& set) {
      const std::size_t n = set.size();
      const auto total = weighted_incidences_with_bisectors(set, multiplicity_map(set));
      const auto heavy = detail::fast_heaviness(set, o.heaviness);
      for (std::size_t m_cut : {std::size_t{2}, std::min<std::size_t>(4, n), n}) {
        std::int64_t pairs = 0, inc = 0;
        for (const auto& band : banded_energy_sweep(set, heavy, m_cut)) {
          pairs += band.report.pair_count;
          inc += weighted_incidences_with_bisectors(set, band.map);
        }
        const std::string at = "M_cut = " + std::to_string(m_cut) + ": ";
        out.check(pairs == static_cast<std::int64_t>(n * (n - 1)), item, at + "pair total " + std::to_string(pairs));
        out.check(inc == total, item, at + "band incidences " + std::to_string(inc) + " != " + std::to_string(total));
      }
    });
  });
}

/// |B| >= min(eps, 1 - eps) * eps * n^2 / 4 on heavy_circle_mix.
inline SuiteResult verify_heavy_circle(const VerifyOptions& o) {
  std::vector<BatteryItem> items;
  for (const auto& eps : {make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)}) {
    for (std::size_t n : o.heavy_sizes) {
      for (std::size_t rep = 0; rep < o.seeds; ++rep) {
        GeneratorSpec s;
        s.family = Family::heavy_circle_mix;
        s.n = n;
        s.epsilon = eps;
        s.seed = job_seed(o.seed, s.family, n, rep);
        items.push_back({config_key(s, rep) + "_eps" + eps.get_num().get_str() + "_" + eps.get_den().get_str(), s,
                         Backend::exact});
      }
    }
  }
  return detail::run_items("heavy_circle", items, o.workers, [](const BatteryItem& item, detail::Outcome& out) {
    const auto set = generate_exact(item.spec);
    const auto b = distinct_bisectors(multiplicity_map(set));
    const auto h = heavy_circle_check(item.spec, b);
    out.check(h.on_circle == ceil_fraction(item.spec.epsilon, item.spec.n), item,
              std::to_string(h.on_circle) + " points on the circle");
    out.check(h.holds, item, "|B| = " + std::to_string(b) + " < " + bisectorlab::to_string(h.bound));
  });
}

/// Fresh random instances of the shared-bisector count plus one instance
/// built to reach the ceiling of 2.
inline SuiteResult verify_shared_bisector(const VerifyOptions& o) {
  using EK = ExactKernel;
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = "shared_bisector";
  auto record = [&](bool ok, const std::string& what) {
    ++r.checks;
    if (!ok && r.failure_count++ < detail::max_counterexamples) r.counterexamples.push_back(what);
  };
  std::mt19937_64 rng(splitmix64(o.seed ^ 0x5b15ec7ULL));
  const Rational zero(0);
  std::size_t max_seen = 0;
  for (std::size_t trial = 0, attempt = 0; trial < o.shared_instances; ++attempt) {
    std::vector<Point<EK>> sample;
    CurveKey<EK> curve;
    if (attempt % 5 == 4) {
      // a line through two random points, sampled at rational parameters
      const auto a = make_point(random_rational(rng, 20, 5), random_rational(rng, 20, 5));
      auto b = make_point(random_rational(rng, 20, 5), random_rational(rng, 20, 5));
      if (a == b) b = make_point(Rational(a.x + 1), a.y);
      curve = line_through(a, b);
      for (long t = -25; t < 25; ++t) {
        const Rational s = make_rational(t, 7);
        sample.push_back(make_point(Rational(a.x + s * (b.x - a.x)), Rational(a.y + s * (b.y - a.y))));
      }
    } else {
      // the unit circle or a random rational circle
      const bool unit = attempt % 5 < 2;
      const Rational cx = unit ? zero : random_rational(rng, 20, 5);
      const Rational cy = unit ? zero : random_rational(rng, 20, 5);
      const Rational rad = unit ? Rational(1) : make_rational(uniform(rng, 1, 40), uniform(rng, 1, 6));
      curve = CanonicalCircle<EK>{cx, cy, rad * rad};
      while (sample.size() < 50) {
        auto p = detail::circle_point(random_rational(rng, 60, 12), cx, cy, rad);
        if (std::find(sample.begin(), sample.end(), p) == sample.end()) sample.push_back(std::move(p));
      }
    }
    const auto p = make_point(random_rational(rng, 40, 6), random_rational(rng, 40, 6));
    const auto q = make_point(random_rational(rng, 40, 6), random_rational(rng, 40, 6));
    if (p == q || on_curve(p, curve) || on_curve(q, curve)) continue;
    const auto c = oracles::shared_bisector_pairs(curve, sample, p, q);
    max_seen = std::max<std::size_t>(max_seen, static_cast<std::size_t>(c));
    record(c <= 2, "instance " + std::to_string(trial++) + ": " + std::to_string(c) + " shared pairs, p = " +
                       to_string(p) + ", q = " + to_string(q));
  }
  r.notes.push_back("largest random count " + std::to_string(max_seen));

  // p, q lie on unit circles around o1 = (3, 0) and o2 = (21/5, 0); their
  // reflections over bi{0, o_i} land on the unit circle.
  const auto p = make_point(make_rational(18, 5), make_rational(4, 5));
  const auto q = make_point(make_rational(18, 5), make_rational(-4, 5));
  std::vector<Point<EK>> sample;
  for (const auto& o_i : {make_point(3L, 0L), make_point(make_rational(21, 5), Rational(0))}) {
    const auto axis = perpendicular_bisector(make_point(0L, 0L), o_i);
    sample.push_back(reflect_over_line(p, axis));
    sample.push_back(reflect_over_line(q, axis));
  }
  for (long t = 2; t < 12; ++t) sample.push_back(detail::circle_point(make_rational(t, 13), zero, zero, Rational(1)));
  const auto constructed =
      oracles::shared_bisector_pairs(CurveKey<EK>(CanonicalCircle<EK>{zero, zero, Rational(1)}), sample, p, q);
  record(constructed == 2, "constructed instance gave " + std::to_string(constructed) + ", expected 2");
  r.notes.push_back("constructed instance count " + std::to_string(constructed));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Dyadic band facts on every instance, and I / rhs at every size within
/// 1.1 times the largest ratio seen at the smallest size.
inline SuiteResult verify_wszt_ratio(const VerifyOptions& o) {
  struct Sample {
    std::int64_t incidences = 0;
    Enclosure rhs;
    bool facts = false;
  };
  const auto items = battery(o.seed, o.wszt_sizes, o.wszt_seeds);
  std::vector<Sample> samples(items.size());
  auto r = detail::run_items("wszt_ratio", items, o.workers, [&](const BatteryItem& item, detail::Outcome& out) {
    const std::size_t i = static_cast<std::size_t>(&item - items.data());
    detail::with_set(item, [&](const auto& set) {
      const auto m = multiplicity_map(set);
      const auto points = unit_weights(set);
      const auto lines = weighted_lines(m);
      samples[i] = {weighted_incidences_with_bisectors(set, m), wszt_rhs_enclosure(points, lines),
                    dyadic_band_facts_hold(points) && dyadic_band_facts_hold(lines)};
      out.check(samples[i].facts, item, "dyadic band facts fail");
    });
  });
  // One constant for all families, as the bound has a single implied
  // constant: the largest ratio observed at the smallest size.
  const std::size_t base_n = o.wszt_sizes.front();
  Rational C(0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].spec.n != base_n) continue;
    const Rational ratio = Rational(samples[i].incidences) / samples[i].rhs.upper;
    if (ratio > C) C = ratio;
  }
  const Rational limit = C * make_rational(11, 10);
  r.notes.push_back("C = " + detail::fmt_double(C.get_d()) + " at n = " + std::to_string(base_n));
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& s = samples[i];
    ++r.checks;
    if (!within_bound(s.incidences, limit, s.rhs) && r.failure_count++ < detail::max_counterexamples) {
      r.counterexamples.push_back(items[i].key + ": I / rhs = " +
                                  detail::fmt_double(Rational(Rational(s.incidences) / s.rhs.lower).get_d()) +
                                  " > 1.1 C");
    }
  }
  for (Family f : all_families) {
    std::string line = std::string(to_string(f)) + " largest I / rhs:";
    for (std::size_t n : o.wszt_sizes) {
      double worst = 0.0;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].spec.family != f || items[i].spec.n != n) continue;
        worst = std::max(worst, Rational(Rational(samples[i].incidences) / samples[i].rhs.upper).get_d());
      }
      line += " n=" + std::to_string(n) + " " + detail::fmt_double(worst);
    }
    r.notes.push_back(std::move(line));
  }
  return r;
}

/// Fast |B|, Q, Q_K, Delta and C(a, b) against the brute-force oracles.
/// `rekey` is forwarded to the fast multiplicity map, so a test can corrupt
/// canonicalization and watch this suite fail.
template <class Rekey = IdentityLine>
SuiteResult verify_oracle_parity(const std::vector<BatteryItem>& items, const VerifyOptions& o, Rekey rekey = {}) {
  return detail::run_items("oracle_parity", items, o.workers, [&](const BatteryItem& item, detail::Outcome& out) {
    detail::with_set(item, [&](const auto& set) {
      const std::size_t n = set.size();
      const auto& caps = o.caps;
      const auto full = multiplicity_map(set, PairRefinement::all(n), rekey);
      if (n <= caps.pairwise) {
        const auto fast = distinct_bisectors(full), slow = oracles::distinct_bisectors_pairwise(set, caps);
        out.check(fast == slow, item, "|B| " + detail::vs(fast, slow));
      }
      if (n <= caps.isoceles) {
        const auto fast = isoceles_count(set), slow = oracles::isoceles_bruteforce(set, caps);
        out.check(fast == slow, item, "Delta " + detail::vs(fast, slow));
      }
      if (n <= caps.energy) {
        const auto fast = bisector_energy(full), slow = oracles::energy_bruteforce(set, nullptr, caps);
        out.check(fast == slow, item, "Q " + detail::vs(fast, slow));
        const auto heavy = detail::fast_heaviness(set, o.heaviness);
        for (std::size_t K : o.K) {
          const auto domain = refine_pairs(heavy, 2, K + 1);
          const auto fast_k = bisector_energy(multiplicity_map(set, domain, rekey));
          // A domain holding every ordered pair is the unrestricted scan again.
          const auto slow_k = domain.size() == n * (n - 1) ? slow : oracles::energy_bruteforce(set, &domain, caps);
          out.check(fast_k == slow_k, item, "Q_" + std::to_string(K) + " " + detail::vs(fast_k, slow_k));
        }
        if (n <= caps.heaviness) {
          bool same = true;
          for (std::size_t i = 0; i < n && same; ++i) {
            for (std::size_t j = i + 1; j < n && same; ++j) {
              const auto c = oracles::heaviness_bruteforce(set, i, j, o.heaviness, caps);
              same = heavy(i, j) == c && heavy(j, i) == c;
            }
          }
          out.check(same, item, "C(a, b) differs from the direct scan");
        }
      }
    });
  });
}

inline VerifyReport verify(Suite suite, const VerifyOptions& o = {}) {
  VerifyReport report;
  const auto items = standard_battery(o);
  auto run = [&](Suite s) {
    switch (s) {
      case Suite::proposition: return verify_proposition(items, o.workers);
      case Suite::shared_bisector: return verify_shared_bisector(o);
      case Suite::cs_chain: return verify_cs_chain(items, o);
      case Suite::delta_identity: {
        auto all = items;
        for (auto& big : battery(o.seed, o.large_sizes, o.large_seeds)) all.push_back(std::move(big));
        return verify_delta_identity(all, o.workers);
      }
      case Suite::heavy_circle: return verify_heavy_circle(o);
      case Suite::band_partition: return verify_band_partition(items, o);
      case Suite::wszt_ratio: return verify_wszt_ratio(o);
      case Suite::oracle_parity: return verify_oracle_parity(items, o);
      case Suite::all: break;
    }
    fail(ErrorCode::InvalidConfig, "unreachable suite");
  };
  if (suite == Suite::all) {
    for (Suite s : all_suites) report.suites.push_back(run(s));
  } else {
    report.suites.push_back(run(suite));
  }
  return report;
}

}  // namespace bisectorlab::lab
