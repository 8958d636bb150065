#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bisectorlab/geometry.hpp"

namespace bisectorlab::testing {

using EP = Point<ExactKernel>;

inline Rational Q(const std::string& s) { return parse_rational(s); }

inline EP P(long x, long y) { return make_point(x, y); }
inline EP P(const std::string& x, const std::string& y) { return make_point(Q(x), Q(y)); }

inline PointSet<ExactKernel> set_of(std::vector<EP> pts) { return PointSet<ExactKernel>(std::move(pts)); }

inline PointSet<ExactKernel> unit_square() { return set_of({P(0, 0), P(1, 0), P(0, 1), P(1, 1)}); }

inline Rational random_rational(std::mt19937_64& rng, long num_bound = 50, long den_bound = 12) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long> den(1, den_bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline EP random_point(std::mt19937_64& rng, long num_bound = 50, long den_bound = 12) {
  return make_point(random_rational(rng, num_bound, den_bound), random_rational(rng, num_bound, den_bound));
}

inline PointSet<ExactKernel> random_set(std::mt19937_64& rng, std::size_t n, long num_bound = 8,
                                        long den_bound = 2) {
  std::vector<EP> pts;
  while (pts.size() < n) {
    EP p = random_point(rng, num_bound, den_bound);
    bool dup = false;
    for (const auto& q : pts) dup = dup || q == p;
    if (!dup) pts.push_back(p);
  }
  return set_of(std::move(pts));
}

using QK = QuantizedFloatKernel;

inline PointSet<QK> qngon(std::size_t n, const QK& k = {}) {
  std::vector<Point<QK>> v;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    v.push_back(make_point(k, std::cos(a), std::sin(a)));
  }
  return PointSet<QK>(std::move(v), k);
}

inline PointSet<ExactKernel> integer_grid(long side) {
  std::vector<EP> pts;
  for (long x = 0; x < side; ++x) {
    for (long y = 0; y < side; ++y) pts.push_back(P(x, y));
  }
  return set_of(std::move(pts));
}

}  // namespace bisectorlab::testing
