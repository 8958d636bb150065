#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bisectorlab/bisectors.hpp"
#include "bisectorlab/distances.hpp"
#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"

namespace bisectorlab {

/// Distinct items with positive integer weights.
template <class Item>
class WeightedSet {
 public:
  using Entry = std::pair<Item, std::int64_t>;

  WeightedSet() = default;
  explicit WeightedSet(std::vector<Entry> items) : items_(std::move(items)) {
    std::unordered_set<Item, GeomHash> seen;
    for (const auto& [item, w] : items_) {
      if (w < 1) fail(ErrorCode::NonPositiveValue, "weights must be >= 1");
      if (!seen.insert(item).second) fail(ErrorCode::DuplicatePoint, "weighted set repeats an item");
    }
  }

  const std::vector<Entry>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

 private:
  std::vector<Entry> items_;
};

template <Kernel K>
using WeightedPoints = WeightedSet<Point<K>>;
template <Kernel K>
using WeightedLines = WeightedSet<CanonicalLine<K>>;

template <Kernel K>
WeightedPoints<K> unit_weights(const PointSet<K>& set) {
  std::vector<std::pair<Point<K>, std::int64_t>> items;
  for (const auto& p : set) items.emplace_back(p, 1);
  return WeightedPoints<K>(std::move(items));
}

template <Kernel K>
WeightedLines<K> weighted_lines(const MultiplicityMap<K>& m) {
  return WeightedLines<K>(m.entries());
}

struct NormTriple {
  std::int64_t l1 = 0;
  std::int64_t l2sq = 0;
  std::int64_t linf = 0;
};

template <class Item>
NormTriple norms(const WeightedSet<Item>& a) {
  if (a.empty()) fail(ErrorCode::EmptySet, "norms of an empty weighted set");
  NormTriple t;
  for (const auto& [item, w] : a.items()) {
    t.l1 += w;
    t.l2sq += w * w;
    t.linf = std::max(t.linf, w);
  }
  return t;
}

template <Kernel K>
std::int64_t weighted_incidence_count(const WeightedPoints<K>& points, const WeightedLines<K>& lines,
                                      const K& k = {}) {
  std::int64_t total = 0;
  for (const auto& [line, wl] : lines.items()) {
    for (const auto& [p, wp] : points.items()) {
      if (on_line(p, line, k)) total += wl * wp;
    }
  }
  return total;
}

/// Rational enclosure lower <= x <= upper of an irrational-or-not quantity.
struct Enclosure {
  Rational lower;
  Rational upper;
};

/// Cube root of a positive integer, enclosed with relative width <= 1e-9
/// (exact when the input is a perfect cube).
inline Enclosure cube_root_enclosure(const Integer& value) {
  if (value <= 0) fail(ErrorCode::NonPositiveValue, "cube root of a non-positive value");
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 9);
  const Integer scaled = value * scale * scale * scale;
  Integer root;
  const int exact = mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), 3);
  Enclosure e;
  e.lower = Rational(root, scale);
  e.lower.canonicalize();
  if (exact) {
    e.upper = e.lower;
  } else {
    e.upper = Rational(root + 1, scale);
    e.upper.canonicalize();
  }
  return e;
}

/// (|P|_2^2 |P|_1 |L|_2^2 |L|_1)^{1/3} + |L|_inf |P|_1 + |P|_inf |L|_1 with
/// constant 1, as an outward-rounded enclosure.
template <Kernel K>
Enclosure wszt_rhs_enclosure(const WeightedPoints<K>& points, const WeightedLines<K>& lines) {
  const NormTriple p = norms(points);
  const NormTriple l = norms(lines);
  auto big = [](std::int64_t v) { return Integer(static_cast<long>(v)); };
  const Integer product = big(p.l2sq) * big(p.l1) * big(l.l2sq) * big(l.l1);
  const Integer linear = big(l.linf) * big(p.l1) + big(p.linf) * big(l.l1);
  Enclosure root = cube_root_enclosure(product);
  root.lower += Rational(linear);
  root.upper += Rational(linear);
  return root;
}

/// The upper end of the enclosure.
template <Kernel K>
Rational wszt_rhs(const WeightedPoints<K>& points, const WeightedLines<K>& lines) {
  return wszt_rhs_enclosure(points, lines).upper;
}

/// I <= c * rhs, decided against the lower end of the enclosure so the
/// answer is never a false "true".
inline bool within_bound(std::int64_t incidences, const Rational& constant, const Enclosure& rhs) {
  return Rational(static_cast<long>(incidences)) <= constant * rhs.lower;
}

template <class Item>
struct WeightBand {
  int exponent = 0;  // weights in [2^exponent, 2^{exponent+1})
  WeightedSet<Item> items;
};

/// Partition by dyadic weight bands, ascending exponent, empty bands omitted.
template <class Item>
std::vector<WeightBand<Item>> dyadic_weight_bands(const WeightedSet<Item>& a) {
  std::vector<std::pair<int, std::vector<typename WeightedSet<Item>::Entry>>> buckets;
  for (const auto& entry : a.items()) {
    const int e = std::bit_width(static_cast<std::uint64_t>(entry.second)) - 1;
    auto it = std::find_if(buckets.begin(), buckets.end(), [&](const auto& b) { return b.first == e; });
    if (it == buckets.end()) {
      buckets.push_back({e, {entry}});
    } else {
      it->second.push_back(entry);
    }
  }
  std::sort(buckets.begin(), buckets.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<WeightBand<Item>> out;
  for (auto& [e, items] : buckets) out.push_back({e, WeightedSet<Item>(std::move(items))});
  return out;
}

/// 2^i |A_i| <= |A|_1 and 2^{2i} |A_i| <= |A|_2^2 for every band i.
template <class Item>
bool dyadic_band_facts_hold(const WeightedSet<Item>& a) {
  const NormTriple total = norms(a);
  for (const auto& band : dyadic_weight_bands(a)) {
    const Integer count(static_cast<unsigned long>(band.items.size()));
    Integer pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 2, static_cast<unsigned long>(band.exponent));
    if (pow * count > Integer(static_cast<long>(total.l1))) return false;
    if (pow * pow * count > Integer(static_cast<long>(total.l2sq))) return false;
  }
  return true;
}

}  // namespace bisectorlab
