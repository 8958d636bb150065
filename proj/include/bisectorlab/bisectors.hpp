#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bisectorlab/curves.hpp"
#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"

namespace bisectorlab {

/// w(l): how many ordered pairs of the domain have l as their bisector.
template <Kernel K>
class MultiplicityMap {
 public:
  using Entry = std::pair<CanonicalLine<K>, std::int64_t>;

  MultiplicityMap() = default;
  MultiplicityMap(std::vector<Entry> entries, std::shared_ptr<const PairRefinement> domain,
                  std::size_t fingerprint)
      : entries_(std::move(entries)), domain_(std::move(domain)), fingerprint_(fingerprint) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
  }

  /// Sorted by line.
  const std::vector<Entry>& entries() const { return entries_; }
  const PairRefinement& domain() const { return *domain_; }
  std::size_t source_fingerprint() const { return fingerprint_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::int64_t weight(const CanonicalLine<K>& line) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), line,
                               [](const Entry& e, const CanonicalLine<K>& l) { return e.first < l; });
    return it != entries_.end() && it->first == line ? it->second : 0;
  }

  std::int64_t total_weight() const {
    std::int64_t s = 0;
    for (const auto& e : entries_) s += e.second;
    return s;
  }

  std::int64_t max_weight() const {
    std::int64_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.second);
    return m;
  }

 private:
  std::vector<Entry> entries_;
  std::shared_ptr<const PairRefinement> domain_ = std::make_shared<PairRefinement>();
  std::size_t fingerprint_ = 0;
};

struct IdentityLine {
  template <class L>
  const L& operator()(const L& l) const {
    return l;
  }
};

/// Builds the multiplicity map of the pairs in `domain`. `rekey` is applied
/// to every canonical bisector before hashing; it exists so tests can inject
/// a faulty canonicalization and watch the oracles catch it.
template <Kernel K, class Rekey = IdentityLine>
MultiplicityMap<K> multiplicity_map(const PointSet<K>& set, PairRefinement domain, Rekey rekey = {}) {
  if (domain.point_count() != set.size()) {
    fail(ErrorCode::MismatchedSource, "pair refinement was built for a different point count");
  }
  std::unordered_map<CanonicalLine<K>, std::int64_t, GeomHash> w;
  w.reserve(domain.size());
  for (const auto& [i, j] : domain.pairs()) {
    // bi{a,b} = bi{b,a}: handle both orders from the smaller index.
    if (i > j && domain.contains(j, i)) continue;
    const std::int64_t count = (i < j && domain.contains(j, i)) ? 2 : 1;
    w[rekey(perpendicular_bisector(set[i], set[j], set.kernel()))] += count;
  }
  std::vector<typename MultiplicityMap<K>::Entry> entries(w.begin(), w.end());
  return MultiplicityMap<K>(std::move(entries),
                            std::make_shared<const PairRefinement>(std::move(domain)),
                            set.fingerprint());
}

template <Kernel K>
MultiplicityMap<K> multiplicity_map(const PointSet<K>& set) {
  return multiplicity_map(set, PairRefinement::all(set.size()));
}

template <Kernel K>
std::int64_t distinct_bisectors(const MultiplicityMap<K>& m) {
  return static_cast<std::int64_t>(m.size());
}

/// Sum of w(l)^2: ordered quadruples (a, b, c, d) with both pairs in the
/// domain and bi{a,b} = bi{c,d}, diagonal quadruples included.
template <Kernel K>
std::int64_t bisector_energy(const MultiplicityMap<K>& m) {
  std::int64_t q = 0;
  for (const auto& e : m.entries()) q += e.second * e.second;
  return q;
}

/// (sum w)^2 / (sum w^2), never more than the number of distinct bisectors.
template <Kernel K>
Rational cs_lower_bound(const MultiplicityMap<K>& m) {
  if (m.empty()) fail(ErrorCode::EmptyMap, "Cauchy-Schwarz bound of an empty multiplicity map");
  const Integer total(static_cast<long>(m.total_weight()));
  const Integer energy(static_cast<long>(bisector_energy(m)));
  Rational r(total * total, energy);
  r.canonicalize();
  return r;
}

struct EnergyReport {
  std::int64_t distinct = 0;
  std::int64_t energy = 0;
  std::int64_t pair_count = 0;
  std::optional<Rational> cs_lower_bound;  // absent for an empty domain

  /// distinct * energy >= pair_count^2, in exact integers.
  bool cauchy_schwarz_holds() const {
    const Integer lhs = Integer(static_cast<long>(distinct)) * Integer(static_cast<long>(energy));
    const Integer p(static_cast<long>(pair_count));
    return lhs >= p * p;
  }
};

template <Kernel K>
EnergyReport energy_report(const MultiplicityMap<K>& m) {
  EnergyReport r;
  r.distinct = distinct_bisectors(m);
  r.energy = bisector_energy(m);
  r.pair_count = m.total_weight();
  if (!m.empty()) r.cs_lower_bound = cs_lower_bound(m);
  return r;
}

template <Kernel K>
struct EnergyBand {
  std::size_t k_low = 0;
  std::size_t k_high = 0;
  MultiplicityMap<K> map;
  EnergyReport report;
};

/// The band [2, m_cut) followed by dyadic bands [2^i, 2^{i+1}) covering
/// [m_cut, n]. The first dyadic band starts at m_cut and the last stops at
/// n + 1, so the bands partition every possible heaviness value.
inline std::vector<std::pair<std::size_t, std::size_t>> heaviness_bands(std::size_t n,
                                                                         std::size_t m_cut) {
  if (m_cut < 2 || m_cut > n) {
    fail(ErrorCode::InvalidRange,
         "need 2 <= M_cut <= n, got M_cut = " + std::to_string(m_cut) + ", n = " + std::to_string(n));
  }
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  if (m_cut > 2) bands.emplace_back(2, m_cut);
  std::size_t low = m_cut;
  while (low <= n) {
    std::size_t pow = 1;
    while (pow <= low) pow <<= 1;  // next power of two above low
    const std::size_t high = std::min(pow, n + 1);
    bands.emplace_back(low, high);
    low = high;
  }
  return bands;
}

template <Kernel K>
std::vector<EnergyBand<K>> banded_energy_sweep(const PointSet<K>& set, const HeavinessMatrix& heaviness,
                                               std::size_t m_cut) {
  if (heaviness.size() != set.size()) {
    fail(ErrorCode::MismatchedSource, "heaviness matrix was built for a different point count");
  }
  std::vector<EnergyBand<K>> out;
  for (const auto& [low, high] : heaviness_bands(set.size(), m_cut)) {
    EnergyBand<K> band;
    band.k_low = low;
    band.k_high = high;
    band.map = multiplicity_map(set, refine_pairs(heaviness, low, high));
    band.report = energy_report(band.map);
    out.push_back(std::move(band));
  }
  return out;
}

template <Kernel K>
std::vector<EnergyBand<K>> banded_energy_sweep(const PointSet<K>& set, const CurveTable<K>& table,
                                               std::size_t m_cut, Heaviness mode = Heaviness::Curves) {
  if (table.source_fingerprint() != set.fingerprint()) {
    fail(ErrorCode::MismatchedSource, "curve table was built from a different point set");
  }
  return banded_energy_sweep(set, heaviness_matrix(table, mode), m_cut);
}

}  // namespace bisectorlab
