#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bisectorlab/bisectors.hpp"
#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"

namespace bisectorlab {

// Every "distance" below is a squared distance.

template <Kernel K>
struct PinnedProfile {
  using Stored = typename K::Stored;
  // per_point[p]: (squared distance, n(p, distance)) sorted by distance, zero excluded.
  std::vector<std::vector<std::pair<Stored, std::int64_t>>> per_point;
  std::int64_t delta_star = 0;

  std::int64_t distinct(std::size_t p) const { return static_cast<std::int64_t>(per_point[p].size()); }
};

template <Kernel K>
PinnedProfile<K> pinned_profile(const PointSet<K>& set) {
  const std::size_t n = set.size();
  PinnedProfile<K> prof;
  prof.per_point.resize(n);
  std::unordered_map<typename K::Stored, std::int64_t, GeomHash> counts;
  for (std::size_t p = 0; p < n; ++p) {
    counts.clear();
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      ++counts[set.kernel().store(squared_distance(set[p], set[q]))];
    }
    auto& row = prof.per_point[p];
    row.assign(counts.begin(), counts.end());
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return three_way(a.first, b.first) < 0; });
    prof.delta_star = std::max(prof.delta_star, static_cast<std::int64_t>(row.size()));
  }
  return prof;
}

/// |Delta| = sum_p sum_d n(p,d) (n(p,d) - 1): ordered triples (a, b, c) with
/// |ab| = |ac| and b != c.
template <Kernel K>
std::int64_t isoceles_count(const PinnedProfile<K>& prof) {
  std::int64_t total = 0;
  for (const auto& row : prof.per_point) {
    for (const auto& [d, m] : row) total += m * (m - 1);
  }
  return total;
}

template <Kernel K>
std::int64_t isoceles_count(const PointSet<K>& set) {
  return isoceles_count(pinned_profile(set));
}

/// sum_p sum_d (n(p,d) - 1)^2, the weaker Cauchy-Schwarz-friendly form.
template <Kernel K>
std::int64_t isoceles_lower_form(const PinnedProfile<K>& prof) {
  std::int64_t total = 0;
  for (const auto& row : prof.per_point) {
    for (const auto& [d, m] : row) total += (m - 1) * (m - 1);
  }
  return total;
}

template <Kernel K>
struct DistanceMultiplicities {
  // (squared distance, ordered pairs at that distance), sorted by distance.
  std::vector<std::pair<typename K::Stored, std::int64_t>> m;
  std::int64_t sum_squares = 0;
};

template <Kernel K>
DistanceMultiplicities<K> distance_multiplicities(const PointSet<K>& set) {
  std::unordered_map<typename K::Stored, std::int64_t, GeomHash> counts;
  for (std::size_t p = 0; p < set.size(); ++p) {
    for (std::size_t q = p + 1; q < set.size(); ++q) {
      counts[set.kernel().store(squared_distance(set[p], set[q]))] += 2;
    }
  }
  DistanceMultiplicities<K> out;
  out.m.assign(counts.begin(), counts.end());
  std::sort(out.m.begin(), out.m.end(),
            [](const auto& a, const auto& b) { return three_way(a.first, b.first) < 0; });
  for (const auto& [d, m] : out.m) out.sum_squares += m * m;
  return out;
}

namespace detail {

struct ApproxLine {
  double a, b, c;
};

inline ApproxLine approx(const CanonicalLine<ExactKernel>& l) {
  return {l.a.get_d(), l.b.get_d(), l.c.get_d()};
}

// Floating-point screen for the exact incidence test. Returns false only when
// the residual provably cannot vanish: mpq_get_d truncates (relative error
// < 2^-52 per conversion) and the evaluation adds a few roundings, all well
// inside the 64u envelope.
inline bool may_be_incident(const ApproxLine& l, double x, double y) {
  const double t1 = l.a * x;
  const double t2 = l.b * y;
  const double r = t1 + t2 + l.c;
  const double scale = std::abs(t1) + std::abs(t2) + std::abs(l.c);
  if (!std::isfinite(r) || !std::isfinite(scale) || scale < 1e-250) return true;
  return std::abs(r) <= 64.0 * DBL_EPSILON * scale;
}

}  // namespace detail

/// I(P, L) with unit point weights: sum over points and lines of w(l)[p in l].
template <Kernel K>
std::int64_t weighted_incidences(const PointSet<K>& set,
                                 const std::vector<std::pair<CanonicalLine<K>, std::int64_t>>& lines) {
  std::int64_t total = 0;
  if constexpr (K::exact) {
    std::vector<std::pair<double, double>> approx_points;
    approx_points.reserve(set.size());
    for (const auto& p : set) approx_points.emplace_back(p.x.get_d(), p.y.get_d());
    for (const auto& [line, w] : lines) {
      const auto al = detail::approx(line);
      for (std::size_t p = 0; p < set.size(); ++p) {
        const auto& [x, y] = approx_points[p];
        if (detail::may_be_incident(al, x, y) && on_line(set[p], line)) total += w;
      }
    }
  } else {
    for (const auto& [line, w] : lines) {
      for (const auto& p : set) {
        if (on_line(p, line, set.kernel())) total += w;
      }
    }
  }
  return total;
}

template <Kernel K>
std::int64_t weighted_incidences_with_bisectors(const PointSet<K>& set, const MultiplicityMap<K>& m) {
  if (m.source_fingerprint() != set.fingerprint()) {
    fail(ErrorCode::MismatchedSource, "multiplicity map was built from a different point set");
  }
  return weighted_incidences(set, m.entries());
}

struct PinnedBoundCheck {
  std::int64_t lhs = 0;  // |Delta|
  Rational rhs;          // n (n - delta*)^2 / delta*
  bool holds = false;
  // With zero excluded from delta(p), each row of n(p, .) sums to n - 1, so
  // Cauchy-Schwarz only gives n (n - 1 - delta*)^2 / delta*. That one always holds.
  Rational sound_rhs;
  bool sound_holds = false;
};

template <Kernel K>
PinnedBoundCheck pinned_lower_bound_check(const PointSet<K>& set, const PinnedProfile<K>& prof) {
  if (prof.delta_star < 1) {
    fail(ErrorCode::InvalidRange, "pinned bound needs at least two points");
  }
  PinnedBoundCheck out;
  out.lhs = isoceles_count(prof);
  const long n = static_cast<long>(set.size());
  const long ds = static_cast<long>(prof.delta_star);
  out.rhs = Rational(Integer(n) * Integer(n - ds) * Integer(n - ds), Integer(ds));
  out.rhs.canonicalize();
  out.holds = Rational(out.lhs) >= out.rhs;
  out.sound_rhs = Rational(Integer(n) * Integer(n - 1 - ds) * Integer(n - 1 - ds), Integer(ds));
  out.sound_rhs.canonicalize();
  out.sound_holds = Rational(out.lhs) >= out.sound_rhs;
  return out;
}

template <Kernel K>
PinnedBoundCheck pinned_lower_bound_check(const PointSet<K>& set) {
  return pinned_lower_bound_check(set, pinned_profile(set));
}

}  // namespace bisectorlab
