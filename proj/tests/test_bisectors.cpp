#include <gtest/gtest.h>

#include <random>
#include <ranges>

#include "bisectorlab/bisectors.hpp"
#include "bisectorlab/oracles.hpp"
#include "test_support.hpp"

using namespace bisectorlab;
using namespace bisectorlab::testing;

namespace {

using EK = ExactKernel;
using EL = CanonicalLine<EK>;

EL line(const std::string& a, const std::string& b, const std::string& c) { return EL{Q(a), Q(b), Q(c)}; }

}  // namespace

TEST(MultiplicityMap, UnitSquare) {
  const auto m = multiplicity_map(unit_square());
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m.weight(line("1", "0", "-1/2")), 4);
  EXPECT_EQ(m.weight(line("0", "1", "-1/2")), 4);
  EXPECT_EQ(m.weight(line("1", "-1", "0")), 2);
  EXPECT_EQ(m.weight(line("1", "1", "-1")), 2);
  EXPECT_EQ(m.total_weight(), 12);
  EXPECT_EQ(distinct_bisectors(m), 4);
  EXPECT_EQ(bisector_energy(m), 40);
  EXPECT_EQ(cs_lower_bound(m), Q("18/5"));
}

TEST(MultiplicityMap, TwoPoints) {
  const auto s = set_of({P(0, 0), P(3, 1)});
  const auto m = multiplicity_map(s);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.entries().front().second, 2);
  EXPECT_EQ(bisector_energy(m), 4);
  EXPECT_EQ(cs_lower_bound(m), 1);
  EXPECT_EQ(oracles::energy_bruteforce(s), 4);
}

TEST(MultiplicityMap, EmptyDomain) {
  const auto s = unit_square();
  const auto t = build_curve_table(s);
  const auto m = multiplicity_map(s, refine_pairs(s, t, 2, 4));
  EXPECT_TRUE(m.empty());
  const auto r = energy_report(m);
  EXPECT_FALSE(r.cs_lower_bound.has_value());
  EXPECT_TRUE(r.cauchy_schwarz_holds());
  try {
    cs_lower_bound(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMap);
  }
}

TEST(MultiplicityMap, OneOrderOnly) {
  const auto s = unit_square();
  const PairRefinement one_way(4, 2, 5, {{0, 1}, {2, 3}, {0, 3}});
  const auto m = multiplicity_map(s, one_way);
  EXPECT_EQ(m.total_weight(), 3);
  EXPECT_EQ(m.weight(line("1", "0", "-1/2")), 2);
  EXPECT_EQ(bisector_energy(m), oracles::energy_bruteforce(s, &one_way));
}

TEST(Energy, EqualWeightsMeetCauchySchwarzExactly) {
  // Every pair of a generic triangle has its own bisector, weight 2.
  const auto m = multiplicity_map(set_of({P(0, 0), P(5, 0), P(1, 3)}));
  EXPECT_EQ(cs_lower_bound(m), distinct_bisectors(m));
}

TEST(Energy, RegularPolygonsUnderQuantizedFloat) {
  for (std::size_t n : {5u, 7u, 9u}) {
    const auto s = qngon(n);
    const auto m = multiplicity_map(s);
    EXPECT_EQ(distinct_bisectors(m), static_cast<std::int64_t>(n));
    const auto expected = static_cast<std::int64_t>(n * (n - 1) * (n - 1));
    EXPECT_EQ(bisector_energy(m), expected);
    EXPECT_EQ(oracles::energy_bruteforce(s), expected);
    EXPECT_TRUE(audit_objects(m.entries() | std::views::keys).passed);
  }
  // Even n: each axis through two vertices bisects n - 2 ordered pairs.
  for (std::size_t n : {6u, 8u}) {
    const auto m = multiplicity_map(qngon(n));
    EXPECT_EQ(distinct_bisectors(m), static_cast<std::int64_t>(n));
    EXPECT_EQ(bisector_energy(m), oracles::energy_bruteforce(qngon(n)));
  }
}

TEST(Energy, ParityWithOraclesOnRandomSets) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_set(rng, 3 + static_cast<std::size_t>(trial % 12), 4, 2);
    const auto m = multiplicity_map(s);
    EXPECT_EQ(bisector_energy(m), oracles::energy_bruteforce(s));
    EXPECT_EQ(distinct_bisectors(m), oracles::distinct_bisectors_pairwise(s));
    EXPECT_GE(distinct_bisectors(m), static_cast<std::int64_t>(s.size()));
    const auto r = energy_report(m);
    EXPECT_TRUE(r.cauchy_schwarz_holds());
    EXPECT_GE(r.energy, r.pair_count);
    EXPECT_LE(r.distinct, r.pair_count);
    EXPECT_LE(*r.cs_lower_bound, r.distinct);
    EXPECT_LE(m.max_weight(), static_cast<std::int64_t>(s.size()));
  }
}

TEST(Energy, RefinedEnergiesAgreeWithOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    const auto s = trial % 3 == 0 ? integer_grid(4) : random_set(rng, 14, 2, 1);
    const auto t = build_curve_table(s);
    for (std::size_t k = 2; k <= s.size(); ++k) {
      const auto pi = refine_pairs(s, t, 2, k + 1);
      const auto m = multiplicity_map(s, pi);
      EXPECT_EQ(bisector_energy(m), oracles::energy_bruteforce(s, &pi));
      EXPECT_EQ(m.total_weight(), static_cast<std::int64_t>(pi.size()));
      EXPECT_TRUE(energy_report(m).cauchy_schwarz_holds());
      if (k > 2) {
        const auto smaller = energy_report(multiplicity_map(s, refine_pairs(s, t, 2, k)));
        const auto r = energy_report(m);
        EXPECT_LE(smaller.distinct, r.distinct);
        EXPECT_LE(smaller.energy, r.energy);
        EXPECT_LE(smaller.pair_count, r.pair_count);
      }
    }
  }
}

TEST(Bands, Boundaries) {
  using B = std::vector<std::pair<std::size_t, std::size_t>>;
  EXPECT_EQ(heaviness_bands(4, 4), (B{{2, 4}, {4, 5}}));
  EXPECT_EQ(heaviness_bands(3, 2), (B{{2, 4}}));
  EXPECT_EQ(heaviness_bands(20, 3), (B{{2, 3}, {3, 4}, {4, 8}, {8, 16}, {16, 21}}));
  EXPECT_EQ(heaviness_bands(16, 5), (B{{2, 5}, {5, 8}, {8, 16}, {16, 17}}));
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{4, 1}, {4, 5}}) {
    try {
      heaviness_bands(n, m);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidRange);
    }
  }
}

TEST(Bands, Examples) {
  const auto s = unit_square();
  const auto sweep = banded_energy_sweep(s, build_curve_table(s), 4);
  ASSERT_EQ(sweep.size(), 2u);
  EXPECT_EQ(sweep[0].report.pair_count, 0);
  EXPECT_EQ(sweep[1].report.pair_count, 12);
  EXPECT_EQ(sweep[1].report.energy, 40);

  const auto c = set_of({P(0, 0), P(1, 0), P(2, 0)});
  const auto sc = banded_energy_sweep(c, build_curve_table(c), 2);
  ASSERT_EQ(sc.size(), 1u);
  EXPECT_EQ(sc[0].report.pair_count, 6);
  EXPECT_EQ(sc[0].report.distinct, 3);
  EXPECT_EQ(sc[0].report.energy, 12);
}

TEST(Bands, PartitionPairs) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = trial % 2 ? integer_grid(4) : random_set(rng, 15, 2, 1);
    const auto t = build_curve_table(s);
    for (std::size_t m_cut = 2; m_cut <= s.size(); m_cut += 3) {
      std::int64_t pairs = 0;
      for (const auto& band : banded_energy_sweep(s, t, m_cut)) {
        pairs += band.report.pair_count;
        EXPECT_TRUE(band.report.cauchy_schwarz_holds());
      }
      EXPECT_EQ(pairs, static_cast<std::int64_t>(s.size() * (s.size() - 1)));
    }
  }
  try {
    banded_energy_sweep(integer_grid(3), build_curve_table(unit_square()), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MismatchedSource);
  }
}

TEST(HeavyCircle, DistinctBisectorLowerBound) {
  // Half the points on the circle x^2 + y^2 = 25, the rest off it.
  std::vector<EP> pts{P(5, 0), P(3, 4), P(4, 3), P(0, 5), P(-3, 4), P(-5, 0)};
  for (long i = 0; i < 6; ++i) pts.push_back(P(i, 2 * i * i + 7));
  const auto s = set_of(pts);
  const auto m = multiplicity_map(s);
  const Rational eps = Q("1/2");
  const Rational n(static_cast<long>(s.size()));
  EXPECT_GE(Rational(distinct_bisectors(m)), eps * eps * n * n / 4);
}
