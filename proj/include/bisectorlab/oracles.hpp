#pragma once

// Brute-force reference counts. These deliberately avoid hash maps and the
// fast paths in curves/bisectors/distances; only geom-core primitives are
// shared.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bisectorlab/curves.hpp"
#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"

namespace bisectorlab::oracles {

struct Caps {
  std::size_t energy = 40;
  std::size_t isoceles = 300;
  std::size_t pairwise = 60;
  std::size_t heaviness = 24;
};

inline void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    fail(ErrorCode::CapExceeded,
         std::string(what) + " oracle capped at n = " + std::to_string(cap) + ", got " + std::to_string(n));
  }
}

/// Quadruple scan over P^4 counting (a,b,c,d) with (a,b), (c,d) in the
/// domain and equal bisectors. No domain means all ordered pairs.
template <Kernel K>
std::int64_t energy_bruteforce(const PointSet<K>& set, const PairRefinement* domain = nullptr,
                               const Caps& caps = {}) {
  const std::size_t n = set.size();
  check_cap(n, caps.energy, "energy");
  auto in_domain = [&](std::size_t a, std::size_t b) {
    return a != b && (domain == nullptr || domain->contains(a, b));
  };
  std::vector<std::optional<CanonicalLine<K>>> bis(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (in_domain(a, b)) bis[a * n + b] = perpendicular_bisector(set[a], set[b], set.kernel());
    }
  }
  std::int64_t count = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!bis[a * n + b]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) {
          if (bis[c * n + d] && *bis[c * n + d] == *bis[a * n + b]) ++count;
        }
      }
    }
  }
  return count;
}

/// Triple scan for (a, b, c) with |ab| = |ac| and b != c.
template <Kernel K>
std::int64_t isoceles_bruteforce(const PointSet<K>& set, const Caps& caps = {}) {
  const std::size_t n = set.size();
  check_cap(n, caps.isoceles, "isoceles");
  std::vector<typename K::Stored> dist(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) dist[a * n + b] = set.kernel().store(squared_distance(set[a], set[b]));
  }
  std::int64_t count = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (b != c && dist[a * n + b] == dist[a * n + c]) ++count;
      }
    }
  }
  return count;
}

/// Distinct bisectors by comparing every canonical line with every earlier one.
template <Kernel K>
std::int64_t distinct_bisectors_pairwise(const PointSet<K>& set, const Caps& caps = {}) {
  const std::size_t n = set.size();
  check_cap(n, caps.pairwise, "pairwise bisector");
  std::vector<CanonicalLine<K>> lines;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) lines.push_back(perpendicular_bisector(set[a], set[b], set.kernel()));
  }
  std::int64_t distinct = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = lines[j] == lines[i];
    if (!seen) ++distinct;
  }
  return distinct;
}

/// C(a, b) by direct scan: every circle through a, b and a third point, and
/// (in Curves mode) the line through a, b, counted point by point.
template <Kernel K>
std::size_t heaviness_bruteforce(const PointSet<K>& set, std::size_t a, std::size_t b,
                                 Heaviness mode = Heaviness::Curves, const Caps& caps = {}) {
  const std::size_t n = set.size();
  check_cap(n, caps.heaviness, "heaviness");
  if (a >= n || b >= n) fail(ErrorCode::IndexOutOfRange, "heaviness pair out of range");
  if (a == b) fail(ErrorCode::DegeneratePair, "heaviness of a point with itself");
  const auto& k = set.kernel();
  std::size_t best = 2;
  auto count_on = [&](const CurveKey<K>& curve) {
    std::size_t c = 0;
    for (const auto& p : set) c += on_curve(p, curve, k) ? 1 : 0;
    return c;
  };
  if (mode == Heaviness::Curves) {
    best = std::max(best, count_on(CurveKey<K>(line_through(set[a], set[b], k))));
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (c == a || c == b) continue;
    try {
      best = std::max(best, count_on(CurveKey<K>(circle_through(set[a], set[b], set[c], k))));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Collinear) throw;
    }
  }
  return best;
}

/// Pairs (r, s) from `sample` (all on `curve`) with bi{p,r} = bi{q,s}. The
/// shared-bisector lemma caps this at 2 for p != q off the curve.
template <Kernel K>
std::int64_t shared_bisector_pairs(const CurveKey<K>& curve, const std::vector<Point<K>>& sample,
                                   const Point<K>& p, const Point<K>& q, const K& k = {}) {
  if (p == q) fail(ErrorCode::DegeneratePair, "p and q must differ");
  if (on_curve(p, curve, k) || on_curve(q, curve, k)) {
    fail(ErrorCode::PointOnCurve, "p and q must lie off the curve");
  }
  for (const auto& r : sample) {
    if (!on_curve(r, curve, k)) fail(ErrorCode::SampleOffCurve, "sample point " + to_string(r) + " is off the curve");
  }
  std::vector<CanonicalLine<K>> from_p;
  std::vector<CanonicalLine<K>> from_q;
  for (const auto& r : sample) {
    from_p.push_back(perpendicular_bisector(p, r, k));
    from_q.push_back(perpendicular_bisector(q, r, k));
  }
  std::int64_t count = 0;
  for (const auto& lp : from_p) {
    for (const auto& lq : from_q) count += lp == lq ? 1 : 0;
  }
  return count;
}

}  // namespace bisectorlab::oracles
