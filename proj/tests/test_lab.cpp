#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bisectorlab/lab/experiment.hpp"
#include "bisectorlab/lab/verify.hpp"
#include "test_support.hpp"

using namespace bisectorlab;
using namespace bisectorlab::lab;
using namespace bisectorlab::testing;

namespace {

GeneratorSpec spec(Family f, std::size_t n, std::uint64_t seed = 1) {
  GeneratorSpec s;
  s.family = f;
  s.n = n;
  s.seed = seed;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Generators, Grid) {
  const auto g = generate_exact(spec(Family::grid, 9));
  for (long i = 0; i < 9; ++i) EXPECT_EQ(g[static_cast<std::size_t>(i)], P(i % 3, i / 3));
  const auto partial = generate_exact(spec(Family::grid, 7));
  EXPECT_EQ(partial.size(), 7u);
  EXPECT_EQ(partial[6], P(0, 2));
}

TEST(Generators, RationalCircle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = generate_exact(spec(Family::rational_circle, 6, seed));
    ASSERT_EQ(s.size(), 6u);
    for (const auto& p : s) EXPECT_EQ(p.x * p.x + p.y * p.y, 1);
  }
}

TEST(Generators, HeavyCircleMix) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = generate_exact(spec(Family::heavy_circle_mix, 20, seed));
    ASSERT_EQ(s.size(), 20u);
    std::size_t on = 0;
    for (const auto& p : s) on += p.x * p.x + p.y * p.y == circle_radius * circle_radius ? 1 : 0;
    EXPECT_EQ(on, 10u);
  }
  auto quarter = spec(Family::heavy_circle_mix, 17);
  quarter.epsilon = make_rational(1, 4);
  EXPECT_EQ(heavy_circle_check(quarter, 0).on_circle, 5u);
}

TEST(Generators, UnionOfCircles) {
  auto s = spec(Family::union_of_circles, 12, 3);
  s.circles = 3;
  const auto set = generate_exact(s);
  std::vector<int> per(3, 0);
  for (const auto& p : set) {
    for (long j = 0; j < 3; ++j) {
      const Rational dx = p.x - 3 * j;
      if (dx * dx + p.y * p.y == 1) ++per[static_cast<std::size_t>(j)];
    }
  }
  EXPECT_EQ(per, (std::vector<int>{4, 4, 4}));
}

TEST(Generators, CollinearAndRandom) {
  const auto c = generate_exact(spec(Family::collinear, 5));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(c[i], P(static_cast<long>(i), 0));
  const auto r = generate_exact(spec(Family::random_rational, 50, 9));
  for (const auto& p : r) {
    EXPECT_LE(abs(p.x.get_num()), 10000);
    EXPECT_LE(p.x.get_den(), 100);
  }
  EXPECT_EQ(generate_exact(spec(Family::random_rational, 50, 9)).fingerprint(), r.fingerprint());
  EXPECT_NE(generate_exact(spec(Family::random_rational, 50, 10)).fingerprint(), r.fingerprint());
}

TEST(Generators, Errors) {
  try {
    generate_exact(spec(Family::ngon, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BackendMismatch);
  }
  try {
    generate_exact(spec(Family::grid, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
  auto tiny = spec(Family::random_rational, 30);
  tiny.num_bound = 1;
  tiny.den_bound = 1;
  try {
    generate_exact(tiny);  // only 9 lattice points exist
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicatePoint);
  }
  EXPECT_THROW(parse_family("hexagon"), Error);
}

TEST(Generators, NgonAudit) {
  const auto q = generate_qfloat(spec(Family::ngon, 40));
  EXPECT_EQ(q.set.size(), 40u);
  EXPECT_TRUE(q.audit.passed);
  EXPECT_EQ(q.audit.keys, 40u);
}

TEST(FitExponent, Examples) {
  std::vector<std::pair<double, double>> lin, quad;
  for (double n : {4.0, 8.0, 16.0, 100.0, 1000.0}) {
    lin.emplace_back(n, n);
    quad.emplace_back(n, n * n);
  }
  EXPECT_NEAR(fit_exponent(lin).slope, 1.0, 1e-6);
  EXPECT_NEAR(fit_exponent(quad).slope, 2.0, 1e-6);
  EXPECT_NEAR(fit_exponent(quad).residual, 0.0, 1e-9);
  try {
    fit_exponent({{1, 1}, {2, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
  try {
    fit_exponent({{1, 1}, {2, 0}, {3, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveValue);
  }
}

TEST(Invariants, UnitSquare) {
  InvariantOptions o;
  o.oracle = true;
  const auto r = compute_invariants(unit_square(), o);
  EXPECT_EQ(r.bisectors->distinct, 4);
  EXPECT_EQ(r.bisectors->energy, 40);
  EXPECT_EQ(*r.isoceles, 8);
  EXPECT_EQ(*r.incidences, 8);
  EXPECT_EQ(*r.delta_star, 2);
  EXPECT_EQ(r.richness->max_coverage, 4);
  EXPECT_EQ(*r.oracle->energy, 40);
  EXPECT_TRUE(r.oracle->heaviness_checked);
  std::int64_t pairs = 0, inc = 0;
  for (const auto& b : r.bands) {
    pairs += b.energy.pair_count;
    inc += b.incidences;
  }
  EXPECT_EQ(pairs, 12);
  EXPECT_EQ(inc, 8);
  EXPECT_FALSE(validate_report(to_json(r)).has_value());
}

TEST(Invariants, NgonSweepHasNBisectors) {
  InvariantOptions o;
  o.invariants = {"bisectors", "richness"};
  for (std::size_t n = 5; n <= 40; ++n) {
    const auto r = run_configuration(spec(Family::ngon, n), Backend::qfloat, o);
    EXPECT_EQ(r.bisectors->distinct, static_cast<std::int64_t>(n));
    EXPECT_EQ(r.richness->max_coverage, n);
    EXPECT_GE(r.richness->s(n), 1);
    ASSERT_TRUE(r.audit);
    EXPECT_TRUE(r.audit->passed);
    if (n % 2 == 1) {
      EXPECT_EQ(r.bisectors->energy, static_cast<std::int64_t>(n * (n - 1) * (n - 1)));
    }
  }
}

TEST(Invariants, GridSweepProposition) {
  InvariantOptions o;
  o.invariants = {"bisectors"};
  for (std::size_t side = 2; side <= 7; ++side) {
    const auto r = run_configuration(spec(Family::grid, side * side), Backend::exact, o);
    EXPECT_GE(r.bisectors->distinct, static_cast<std::int64_t>(side * side));
  }
}

TEST(Invariants, QfloatAgreesWithExactSource) {
  // Circles through nearly collinear triples have centers far outside the
  // quantization range, so only line and distance invariants are compared.
  InvariantOptions o;
  o.invariants = {"bisectors", "pinned", "incidences"};
  o.oracle = true;
  const auto s = spec(Family::random_rational, 12, 4);
  const auto exact = run_configuration(s, Backend::exact, o);
  const auto q = run_configuration(s, Backend::qfloat, o);
  EXPECT_EQ(exact.bisectors->distinct, q.bisectors->distinct);
  EXPECT_EQ(*exact.isoceles, *q.isoceles);
  EXPECT_TRUE(q.audit->passed);
}

TEST(Invariants, SkippedAboveCaps) {
  InvariantOptions o;
  o.oracle = true;
  o.caps.energy = 10;
  o.caps.heaviness = 10;
  const auto r = run_configuration(spec(Family::grid, 16), Backend::exact, o);
  EXPECT_FALSE(r.oracle->energy);
  EXPECT_TRUE(r.oracle->distinct);
  EXPECT_EQ(r.skipped, (std::vector<std::string>{"oracle.energy", "oracle.heaviness"}));
}

TEST(Invariants, HeavyCircleBound) {
  InvariantOptions o;
  o.invariants = {"bisectors"};
  for (const auto& eps : {make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)}) {
    auto s = spec(Family::heavy_circle_mix, 16, 2);
    s.epsilon = eps;
    const auto r = run_configuration(s, Backend::exact, o);
    ASSERT_TRUE(r.heavy_circle);
    EXPECT_EQ(r.heavy_circle->on_circle, ceil_fraction(eps, 16));
    EXPECT_TRUE(r.heavy_circle->holds);
  }
}

TEST(Config, ParseAndReject) {
  const auto cfg = parse_experiment_config(io::json::parse(R"({
    "seed": 5, "seeds_per_size": 2,
    "sweeps": [{"family": "grid", "sizes": [4, 9]}, {"family": "ngon", "sizes": [5]},
               {"family": "heavy_circle_mix", "sizes": [8], "epsilon": "1/4"}],
    "invariants": ["bisectors", "pinned"], "K": [3], "m_cut": 3, "heaviness": "circles", "oracle": true
  })"));
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.sweeps[1].backend, Backend::qfloat);
  EXPECT_EQ(cfg.sweeps[2].epsilon, make_rational(1, 4));
  EXPECT_EQ(cfg.options.heaviness, Heaviness::CirclesOnly);
  const auto jobs = experiment_jobs(cfg);
  ASSERT_EQ(jobs.size(), 5u);  // grid x2, ngon, heavy x2 seeds
  EXPECT_EQ(jobs[0].key, "grid_n4_s0");
  EXPECT_EQ(jobs[3].key, "heavy_circle_mix_n8_s0");
  EXPECT_NE(jobs[3].spec.seed, jobs[4].spec.seed);

  for (const char* bad : {R"({"sweeps": [{"family": "hexagon", "sizes": [4]}]})",
                          R"({"sweeps": [{"family": "grid", "sizes": [1]}]})", R"({"sweeps": [], "bogus": 1})",
                          R"({"sweeps": [], "invariants": ["everything"]})", R"({"sweeps": [], "K": [1]})",
                          R"({"seed": 3})"}) {
    try {
      parse_experiment_config(io::json::parse(bad));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << bad;
    }
  }
}

TEST(Experiment, DeterministicAcrossWorkers) {
  const auto cfg = parse_experiment_config(io::json::parse(R"({
    "seed": 11, "seeds_per_size": 2,
    "sweeps": [{"family": "random_rational", "sizes": [6, 10, 14]}, {"family": "ngon", "sizes": [5, 6, 7]},
               {"family": "union_of_circles", "sizes": [8, 12, 16], "circles": 2}],
    "oracle": true
  })"));
  const auto base = std::filesystem::temp_directory_path() / "bisectorlab_test_lab";
  std::filesystem::remove_all(base);
  write_sweep(run_experiment(cfg, 1), base / "a");
  write_sweep(run_experiment(cfg, 4), base / "b");
  write_sweep(run_experiment(cfg, 1), base / "c");
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), base / "a");
    EXPECT_EQ(slurp(entry.path()), slurp(base / "b" / rel)) << rel;
    EXPECT_EQ(slurp(entry.path()), slurp(base / "c" / rel)) << rel;
    if (rel.filename() == "report.json") {
      EXPECT_FALSE(validate_report(io::json::parse(slurp(entry.path()))).has_value()) << rel;
    }
    ++files;
  }
  EXPECT_EQ(files, 2u * (6 + 3 + 6) + 1);
  const auto summary = slurp(base / "a" / "summary.csv");
  EXPECT_NE(summary.find("ngon,qfloat,distinct_bisectors,3,1,"), std::string::npos) << summary;
  std::filesystem::remove_all(base);
}

TEST(Report, CsvFlattensJson) {
  InvariantOptions o;
  o.invariants = {"bisectors"};
  const auto r = compute_invariants(unit_square(), o, io::json{{"source", "a,b"}});
  const auto csv = to_csv(r);
  EXPECT_EQ(csv.rfind("field,value\n", 0), 0u);
  EXPECT_NE(csv.find("config.source,\"a,b\"\n"), std::string::npos);
  EXPECT_NE(csv.find("bisectors.energy,40\n"), std::string::npos);
}

TEST(Report, ValidatorRejects) {
  InvariantOptions o;
  auto j = to_json(compute_invariants(unit_square(), o));
  EXPECT_FALSE(validate_report(j).has_value());
  auto bad = j;
  bad["bisectors"]["energy"] = 40;
  EXPECT_TRUE(validate_report(bad).has_value());
  bad = j;
  bad.erase("skipped");
  EXPECT_TRUE(validate_report(bad).has_value());
  bad = j;
  bad["backend"] = "float";
  EXPECT_TRUE(validate_report(bad).has_value());
}

// A deliberately broken canonicalization must be caught by the parity suite.
TEST(Verify, OracleParityCatchesCorruptKeys) {
  VerifyOptions v;
  v.seeds = 2;
  v.sizes = {6, 8};
  v.workers = 1;
  const auto items = standard_battery(v);
  const auto clean = verify_oracle_parity(items, v);
  EXPECT_TRUE(clean.passed()) << (clean.counterexamples.empty() ? "" : clean.counterexamples.front());

  const auto truncate_c = [](const auto& l) {
    auto out = l;
    if constexpr (std::is_same_v<std::decay_t<decltype(l)>, CanonicalLine<ExactKernel>>) {
      out.c = Rational(Integer(out.c));
    }
    return out;
  };
  const auto broken = verify_oracle_parity(items, v, truncate_c);
  EXPECT_FALSE(broken.passed());
  EXPECT_GT(broken.failure_count, 0u);
  EXPECT_FALSE(broken.counterexamples.empty());
}
