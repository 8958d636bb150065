#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bisectorlab/error.hpp"
#include "bisectorlab/geometry.hpp"
#include "bisectorlab/parallel.hpp"

namespace bisectorlab {

/// Which curves count toward the heaviness C(a, b) of a pair.
enum class Heaviness {
  Curves,       // lines and circles
  CirclesOnly,  // circles only; a bare pair still counts as 2
};

inline std::string_view to_string(Heaviness h) {
  return h == Heaviness::Curves ? "curves" : "circles";
}

template <Kernel K>
struct CurveEntry {
  CurveKey<K> curve;
  std::vector<std::size_t> points;  // sorted indices into the source set
};

/// Every line through >= 2 points and every circle through >= 3 points of a
/// point set, each listed once with its full incident-point list.
template <Kernel K>
class CurveTable {
 public:
  CurveTable() = default;
  CurveTable(std::vector<CurveEntry<K>> entries, std::size_t n, std::size_t fingerprint)
      : entries_(std::move(entries)), n_(n), fingerprint_(fingerprint) {
    std::sort(entries_.begin(), entries_.end(), [](const CurveEntry<K>& l, const CurveEntry<K>& r) {
      if (l.curve.index() != r.curve.index()) return l.curve.index() < r.curve.index();
      return l.points < r.points;
    });
    by_point_.assign(n_, {});
    index_.reserve(entries_.size());
    for (std::size_t e = 0; e < entries_.size(); ++e) {
      index_.emplace(entries_[e].curve, e);
      for (std::size_t p : entries_[e].points) by_point_[p].push_back(e);
      if (is_line(entries_[e].curve)) {
        ++lines_;
      } else {
        ++circles_;
      }
    }
  }

  const std::vector<CurveEntry<K>>& entries() const { return entries_; }
  std::size_t point_count() const { return n_; }
  std::size_t source_fingerprint() const { return fingerprint_; }
  std::size_t line_count() const { return lines_; }
  std::size_t circle_count() const { return circles_; }

  const CurveEntry<K>* find(const CurveKey<K>& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  /// Entry indices of the curves through point `p`.
  std::span<const std::size_t> curves_through(std::size_t p) const {
    if (p >= n_) fail(ErrorCode::IndexOutOfRange, "point index " + std::to_string(p));
    return by_point_[p];
  }

 private:
  std::vector<CurveEntry<K>> entries_;
  std::unordered_map<CurveKey<K>, std::size_t, GeomHash> index_;
  std::vector<std::vector<std::size_t>> by_point_;
  std::size_t n_ = 0;
  std::size_t fingerprint_ = 0;
  std::size_t lines_ = 0;
  std::size_t circles_ = 0;
};

namespace detail {

struct Direction {
  bool vertical = false;
  Rational slope;
  friend bool operator==(const Direction&, const Direction&) = default;
};

struct DirectionHash {
  std::size_t operator()(const Direction& d) const {
    return d.vertical ? 0x7f4a7c15u : hash_value(d.slope);
  }
};

// Groups the other points by their direction from p_i: one group per line
// through p_i, members ascending.
template <class Fn>
void line_groups(const PointSet<ExactKernel>& set, std::size_t i, Fn&& fn) {
  const auto& pi = set[i];
  std::unordered_map<Direction, std::vector<std::size_t>, DirectionHash> groups;
  for (std::size_t j = 0; j < set.size(); ++j) {
    if (j == i) continue;
    const Rational dx = set[j].x - pi.x;
    const Rational dy = set[j].y - pi.y;
    Direction dir;
    if (sgn(dx) == 0) {
      dir.vertical = true;
    } else {
      dir.slope = dy / dx;
    }
    groups[std::move(dir)].push_back(j);
  }
  for (const auto& [dir, members] : groups) fn(members);
}

// Lines through point i whose other members all have larger indices, so each
// line is produced exactly once (by its smallest point).
inline std::vector<CurveEntry<ExactKernel>> exact_lines_from(const PointSet<ExactKernel>& set,
                                                             std::size_t i) {
  std::vector<CurveEntry<ExactKernel>> out;
  line_groups(set, i, [&](const std::vector<std::size_t>& members) {
    if (members.front() < i) return;
    std::vector<std::size_t> pts;
    pts.reserve(members.size() + 1);
    pts.push_back(i);
    pts.insert(pts.end(), members.begin(), members.end());
    out.push_back({line_through(set[i], set[members.front()]), std::move(pts)});
  });
  return out;
}

// Integer image of an exact point set: every coordinate times the common
// denominator. Lines, circles and the grouping parameter below are invariant
// under this scaling.
struct ExactFrame {
  std::size_t n = 0;
  std::vector<Integer> dot;    // n x n
  std::vector<Integer> cross;  // n x n, antisymmetric

  explicit ExactFrame(const PointSet<ExactKernel>& set) : n(set.size()), dot(n * n), cross(n * n) {
    Integer scale = 1;
    for (const auto& p : set) {
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), p.x.get_den_mpz_t());
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), p.y.get_den_mpz_t());
    }
    std::vector<Integer> xs(n), ys(n);
    for (std::size_t a = 0; a < n; ++a) {
      xs[a] = set[a].x.get_num() * (scale / set[a].x.get_den());
      ys[a] = set[a].y.get_num() * (scale / set[a].y.get_den());
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        dot[a * n + b] = xs[a] * xs[b] + ys[a] * ys[b];
        dot[b * n + a] = dot[a * n + b];
        cross[a * n + b] = xs[a] * ys[b] - ys[a] * xs[b];
        cross[b * n + a] = -cross[a * n + b];
      }
    }
  }

  const Integer& d(std::size_t a, std::size_t b) const { return dot[a * n + b]; }
  const Integer& c(std::size_t a, std::size_t b) const { return cross[a * n + b]; }
};

// num / den as a double with relative error below 3 ulp, or NaN when the
// exponents leave the comfortable range.
inline double approx_ratio(const Integer& num, const Integer& den) {
  if (sgn(num) == 0) return 0.0;
  long en = 0;
  long ed = 0;
  const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  const long e = en - ed;
  if (e > 900 || e < -900) return std::numeric_limits<double>::quiet_NaN();
  return std::ldexp(mn / md, static_cast<int>(e));
}

struct CircleScratch {
  struct Candidate {
    double t;
    std::uint32_t k;
  };
  std::vector<Integer> num;
  std::vector<Integer> den;
  std::vector<Candidate> cands;
  std::vector<std::pair<Rational, std::uint32_t>> exact;
  std::vector<std::size_t> members;
};

// Groups the points k != i, j off the line p_i p_j by the circle through
// p_i, p_j, p_k. Centers lie on bi{p_i, p_j}; k is keyed by the position
// t = num/den of its center along that bisector, with num and den built from
// precomputed integer dot and cross products. Candidates are sorted by a
// double image of t whose error is bounded, so equal parameters always land
// in one run; runs of more than one candidate are split exactly.
template <class Fn>
void circle_groups(const ExactFrame& f, std::size_t i, std::size_t j, CircleScratch& s, Fn&& fn) {
  const std::size_t n = f.n;
  s.num.resize(n);
  s.den.resize(n);
  s.cands.clear();
  bool fallback = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    Integer& den = s.den[k];
    den = f.c(i, j) + f.c(j, k);
    den += f.c(k, i);
    if (sgn(den) == 0) continue;  // collinear with p_i, p_j
    Integer& num = s.num[k];
    num = f.d(k, k) - f.d(i, k);
    num -= f.d(j, k);
    num += f.d(i, j);
    if (sgn(den) < 0) {
      mpz_neg(den.get_mpz_t(), den.get_mpz_t());
      mpz_neg(num.get_mpz_t(), num.get_mpz_t());
    }
    const double t = approx_ratio(num, den);
    fallback = fallback || !std::isfinite(t);
    s.cands.push_back({t, static_cast<std::uint32_t>(k)});
  }
  auto emit_exact = [&](std::size_t lo, std::size_t hi) {
    s.exact.clear();
    for (std::size_t c = lo; c < hi; ++c) {
      const std::uint32_t k = s.cands[c].k;
      Rational q;
      mpz_set(mpq_numref(q.get_mpq_t()), s.num[k].get_mpz_t());
      mpz_set(mpq_denref(q.get_mpq_t()), s.den[k].get_mpz_t());
      q.canonicalize();
      s.exact.emplace_back(std::move(q), k);
    }
    std::sort(s.exact.begin(), s.exact.end(), [](const auto& a, const auto& b) {
      const int c = cmp(a.first, b.first);
      return c != 0 ? c < 0 : a.second < b.second;
    });
    for (std::size_t a = 0; a < s.exact.size();) {
      std::size_t b = a;
      s.members.clear();
      while (b < s.exact.size() && s.exact[b].first == s.exact[a].first) s.members.push_back(s.exact[b++].second);
      fn(std::as_const(s.members));
      a = b;
    }
  };
  if (fallback) {
    emit_exact(0, s.cands.size());
    return;
  }
  std::sort(s.cands.begin(), s.cands.end(), [](const auto& a, const auto& b) {
    return a.t != b.t ? a.t < b.t : a.k < b.k;
  });
  constexpr double tol = 8 * std::numeric_limits<double>::epsilon();
  for (std::size_t a = 0; a < s.cands.size();) {
    std::size_t b = a + 1;
    while (b < s.cands.size() &&
           s.cands[b].t - s.cands[b - 1].t <= tol * std::max(std::abs(s.cands[b].t), std::abs(s.cands[b - 1].t))) {
      ++b;
    }
    if (b == a + 1) {
      s.members.assign(1, s.cands[a].k);
      fn(std::as_const(s.members));
    } else {
      emit_exact(a, b);
    }
    a = b;
  }
}

// Circles whose two smallest incident indices are i < j.
inline std::vector<CurveEntry<ExactKernel>> exact_circles_from(const PointSet<ExactKernel>& set, std::size_t i,
                                                               const ExactFrame& frame) {
  std::vector<CurveEntry<ExactKernel>> out;
  CircleScratch scratch;
  for (std::size_t j = i + 1; j < set.size(); ++j) {
    circle_groups(frame, i, j, scratch, [&](const std::vector<std::size_t>& members) {
      if (members.front() < j) return;
      std::vector<std::size_t> pts;
      pts.reserve(members.size() + 2);
      pts.push_back(i);
      pts.push_back(j);
      pts.insert(pts.end(), members.begin(), members.end());
      out.push_back({circle_through(set[i], set[j], set[members.front()]), std::move(pts)});
    });
  }
  return out;
}

template <Kernel K>
std::vector<std::size_t> incident_points(const PointSet<K>& set, const CurveKey<K>& key) {
  std::vector<std::size_t> pts;
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (on_curve(set[p], key, set.kernel())) pts.push_back(p);
  }
  return pts;
}

// Float backend: hash dedupe on quantized keys, incident lists recomputed
// with the tolerant predicate.
inline std::vector<CurveEntry<QuantizedFloatKernel>> qfloat_curves(
    const PointSet<QuantizedFloatKernel>& set) {
  using QK = QuantizedFloatKernel;
  const auto& k = set.kernel();
  const std::size_t n = set.size();
  std::unordered_map<CurveKey<QK>, std::vector<std::size_t>, GeomHash> found;
  auto add = [&](CurveKey<QK> key) {
    if (found.contains(key)) return;
    auto pts = incident_points(set, key);
    found.emplace(std::move(key), std::move(pts));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      add(line_through(set[i], set[j], k));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t l = j + 1; l < n; ++l) {
        try {
          add(circle_through(set[i], set[j], set[l], k));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Collinear) throw;
        }
      }
    }
  }
  std::vector<CurveEntry<QK>> out;
  out.reserve(found.size());
  for (auto& [key, pts] : found) {
    const std::size_t need = std::holds_alternative<CanonicalLine<QK>>(key) ? 2 : 3;
    if (pts.size() >= need) out.push_back({key, std::move(pts)});
  }
  return out;
}

}  // namespace detail

/// Enumerates all rich lines and circles. Work for the exact backend is
/// sharded by the smallest incident point; the result is independent of
/// `workers`.
template <Kernel K>
CurveTable<K> build_curve_table(const PointSet<K>& set, std::size_t workers = 1) {
  const std::size_t n = set.size();
  if (n < 2) return CurveTable<K>({}, n, set.fingerprint());
  if constexpr (K::exact) {
    const detail::ExactFrame frame(set);
    std::vector<std::vector<CurveEntry<K>>> shards(n);
    parallel_for(
        n,
        [&](std::size_t i) {
          auto lines = detail::exact_lines_from(set, i);
          auto circles = detail::exact_circles_from(set, i, frame);
          shards[i] = std::move(lines);
          for (auto& c : circles) shards[i].push_back(std::move(c));
        },
        workers);
    std::vector<CurveEntry<K>> all;
    for (auto& s : shards) {
      for (auto& e : s) all.push_back(std::move(e));
    }
    return CurveTable<K>(std::move(all), n, set.fingerprint());
  } else {
    (void)workers;
    return CurveTable<K>(detail::qfloat_curves(set), n, set.fingerprint());
  }
}

template <Kernel K>
SeparationAudit audit_curve_table(const CurveTable<K>& table) {
  if constexpr (K::exact) {
    return SeparationAudit{};
  } else {
    std::vector<CanonicalLine<K>> lines;
    std::vector<CanonicalCircle<K>> circles;
    for (const auto& e : table.entries()) {
      if (const auto* l = std::get_if<CanonicalLine<K>>(&e.curve)) {
        lines.push_back(*l);
      } else {
        circles.push_back(std::get<CanonicalCircle<K>>(e.curve));
      }
    }
    auto audit = audit_objects(lines);
    audit.merge(audit_objects(circles));
    return audit;
  }
}

// Richness ------------------------------------------------------------------

/// s_k (curves with at least k points) and s_{=k} (exactly k), for
/// 2 <= k <= max_coverage. Lookups outside that range return 0.
struct RichnessProfile {
  std::size_t max_coverage = 0;
  std::vector<std::int64_t> at_least_;  // indexed by k, size max_coverage + 2
  std::vector<std::int64_t> exactly_;
  std::vector<std::int64_t> exactly_lines_;
  std::vector<std::int64_t> exactly_circles_;

  std::int64_t s(std::size_t k) const { return k < at_least_.size() && k >= 2 ? at_least_[k] : 0; }
  std::int64_t s_eq(std::size_t k) const { return k < exactly_.size() && k >= 2 ? exactly_[k] : 0; }
  std::int64_t s_eq_lines(std::size_t k) const {
    return k < exactly_lines_.size() ? exactly_lines_[k] : 0;
  }
  std::int64_t s_eq_circles(std::size_t k) const {
    return k < exactly_circles_.size() ? exactly_circles_[k] : 0;
  }
};

/// Curve counts by incident-point count: lines[k], circles[k].
struct CurveCounts {
  std::vector<std::int64_t> lines;
  std::vector<std::int64_t> circles;

  void add(bool line, std::size_t k) {
    auto& v = line ? lines : circles;
    if (v.size() <= k) v.resize(k + 1, 0);
    ++v[k];
  }
  void merge(const CurveCounts& o) {
    for (std::size_t k = 0; k < o.lines.size(); ++k) {
      if (o.lines[k] != 0) add_many(lines, k, o.lines[k]);
    }
    for (std::size_t k = 0; k < o.circles.size(); ++k) {
      if (o.circles[k] != 0) add_many(circles, k, o.circles[k]);
    }
  }

 private:
  static void add_many(std::vector<std::int64_t>& v, std::size_t k, std::int64_t c) {
    if (v.size() <= k) v.resize(k + 1, 0);
    v[k] += c;
  }
};

inline RichnessProfile richness_profile(const CurveCounts& counts) {
  RichnessProfile prof;
  prof.max_coverage = std::max(counts.lines.size(), counts.circles.size());
  prof.max_coverage = prof.max_coverage == 0 ? 0 : prof.max_coverage - 1;
  const std::size_t size = prof.max_coverage + 2;
  prof.at_least_.assign(size, 0);
  prof.exactly_.assign(size, 0);
  prof.exactly_lines_.assign(size, 0);
  prof.exactly_circles_.assign(size, 0);
  for (std::size_t k = 0; k < counts.lines.size(); ++k) prof.exactly_lines_[k] = counts.lines[k];
  for (std::size_t k = 0; k < counts.circles.size(); ++k) prof.exactly_circles_[k] = counts.circles[k];
  for (std::size_t k = 0; k < size; ++k) prof.exactly_[k] = prof.exactly_lines_[k] + prof.exactly_circles_[k];
  for (std::size_t k = prof.max_coverage + 1; k-- > 2;) {
    prof.at_least_[k] = prof.at_least_[k + 1] + prof.exactly_[k];
  }
  return prof;
}

template <Kernel K>
RichnessProfile richness_profile(const CurveTable<K>& table) {
  CurveCounts counts;
  for (const auto& e : table.entries()) counts.add(is_line(e.curve), e.points.size());
  return richness_profile(counts);
}

/// Same profile without materializing the table; the exact backend streams
/// curve sizes shard by shard.
template <Kernel K>
RichnessProfile richness_profile(const PointSet<K>& set, std::size_t workers = 1) {
  if constexpr (K::exact) {
    const std::size_t n = set.size();
    if (n < 2) return richness_profile(CurveCounts{});
    const detail::ExactFrame frame(set);
    std::vector<CurveCounts> shards(n);
    parallel_for(
        n,
        [&](std::size_t i) {
          auto& c = shards[i];
          detail::line_groups(set, i, [&](const std::vector<std::size_t>& members) {
            if (members.front() > i) c.add(true, members.size() + 1);
          });
          detail::CircleScratch scratch;
          for (std::size_t j = i + 1; j < n; ++j) {
            detail::circle_groups(frame, i, j, scratch, [&](const std::vector<std::size_t>& members) {
              if (members.front() > j) c.add(false, members.size() + 2);
            });
          }
        },
        workers);
    CurveCounts total;
    for (const auto& c : shards) total.merge(c);
    return richness_profile(total);
  } else {
    return richness_profile(build_curve_table(set, workers));
  }
}

// Heaviness and refined pair sets --------------------------------------------

/// C(p_i, p_j): most points on one curve (per `mode`) through both points.
template <Kernel K>
std::size_t pair_heaviness(const CurveTable<K>& table, std::size_t i, std::size_t j,
                           Heaviness mode = Heaviness::Curves) {
  const std::size_t n = table.point_count();
  if (i >= n || j >= n) {
    fail(ErrorCode::IndexOutOfRange, "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  if (i == j) fail(ErrorCode::DegeneratePair, "heaviness of a point with itself");
  std::size_t best = 2;
  for (std::size_t e : table.curves_through(i)) {
    const auto& entry = table.entries()[e];
    if (mode == Heaviness::CirclesOnly && is_line(entry.curve)) continue;
    if (entry.points.size() <= best) continue;
    if (std::binary_search(entry.points.begin(), entry.points.end(), j)) best = entry.points.size();
  }
  return best;
}

/// Dense n x n table of C(a, b); the diagonal is 0.
class HeavinessMatrix {
 public:
  HeavinessMatrix() = default;
  explicit HeavinessMatrix(std::size_t n) : n_(n), values_(n * n, 0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) values_[i * n + j] = 2;
      }
    }
  }
  std::size_t size() const { return n_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void raise(std::size_t i, std::size_t j, std::uint32_t v) {
    auto& slot = values_[i * n_ + j];
    slot = std::max(slot, v);
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> values_;
};

template <Kernel K>
HeavinessMatrix heaviness_matrix(const CurveTable<K>& table, Heaviness mode = Heaviness::Curves) {
  HeavinessMatrix m(table.point_count());
  for (const auto& e : table.entries()) {
    if (mode == Heaviness::CirclesOnly && is_line(e.curve)) continue;
    const auto size = static_cast<std::uint32_t>(e.points.size());
    for (std::size_t a : e.points) {
      for (std::size_t b : e.points) {
        if (a != b) m.raise(a, b, size);
      }
    }
  }
  return m;
}

/// Direct computation from the point set, without a curve table.
template <Kernel K>
HeavinessMatrix heaviness_matrix(const PointSet<K>& set, Heaviness mode = Heaviness::Curves,
                                 std::size_t workers = 1) {
  if constexpr (K::exact) {
    const std::size_t n = set.size();
    HeavinessMatrix m(n);
    if (n < 2) return m;
    const detail::ExactFrame frame(set);
    parallel_for(
        n,
        [&](std::size_t i) {
          // Shard i owns the slots (i, j) and (j, i) for j > i.
          if (mode == Heaviness::Curves) {
            detail::line_groups(set, i, [&](const std::vector<std::size_t>& members) {
              const auto size = static_cast<std::uint32_t>(members.size() + 1);
              for (std::size_t j : members) {
                if (j > i) {
                  m.raise(i, j, size);
                  m.raise(j, i, size);
                }
              }
            });
          }
          detail::CircleScratch scratch;
          for (std::size_t j = i + 1; j < n; ++j) {
            std::uint32_t best = 2;
            detail::circle_groups(frame, i, j, scratch, [&](const std::vector<std::size_t>& members) {
              best = std::max(best, static_cast<std::uint32_t>(members.size() + 2));
            });
            m.raise(i, j, best);
            m.raise(j, i, best);
          }
        },
        workers);
    return m;
  } else {
    return heaviness_matrix(build_curve_table(set, workers), mode);
  }
}

struct OrderedPair {
  std::uint32_t first;
  std::uint32_t second;
  friend auto operator<=>(const OrderedPair&, const OrderedPair&) = default;
};

/// Ordered pairs (i, j), i != j, whose heaviness lies in [k_low, k_high).
class PairRefinement {
 public:
  PairRefinement() = default;
  PairRefinement(std::size_t n, std::size_t k_low, std::size_t k_high, std::vector<OrderedPair> pairs)
      : n_(n), k_low_(k_low), k_high_(k_high), pairs_(std::move(pairs)), member_(n * n, false) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    for (const auto& p : pairs_) {
      if (p.first >= n || p.second >= n || p.first == p.second) {
        fail(ErrorCode::IndexOutOfRange, "invalid pair in refinement");
      }
      member_[p.first * n + p.second] = true;
    }
  }

  /// Every ordered pair of distinct points; heaviness bounds span all values.
  static PairRefinement all(std::size_t n) {
    std::vector<OrderedPair> pairs;
    pairs.reserve(n * (n - 1));
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (i != j) pairs.push_back({i, j});
      }
    }
    return PairRefinement(n, 2, n + 1, std::move(pairs));
  }

  std::size_t point_count() const { return n_; }
  std::size_t k_low() const { return k_low_; }
  std::size_t k_high() const { return k_high_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<OrderedPair>& pairs() const { return pairs_; }
  bool contains(std::size_t i, std::size_t j) const {
    return i < n_ && j < n_ && member_[i * n_ + j];
  }

 private:
  std::size_t n_ = 0;
  std::size_t k_low_ = 2;
  std::size_t k_high_ = 2;
  std::vector<OrderedPair> pairs_;
  std::vector<bool> member_;
};

inline PairRefinement refine_pairs(const HeavinessMatrix& heaviness, std::size_t k_low,
                                   std::size_t k_high) {
  if (k_low < 2 || k_low >= k_high) {
    fail(ErrorCode::InvalidRange,
         "need 2 <= K_low < K_high, got [" + std::to_string(k_low) + ", " + std::to_string(k_high) + ")");
  }
  const std::size_t n = heaviness.size();
  std::vector<OrderedPair> pairs;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t c = heaviness(i, j);
      if (c >= k_low && c < k_high) pairs.push_back({i, j});
    }
  }
  return PairRefinement(n, k_low, k_high, std::move(pairs));
}

template <Kernel K>
PairRefinement refine_pairs(const PointSet<K>& set, const CurveTable<K>& table, std::size_t k_low,
                            std::size_t k_high, Heaviness mode = Heaviness::Curves) {
  if (table.source_fingerprint() != set.fingerprint()) {
    fail(ErrorCode::MismatchedSource, "curve table was built from a different point set");
  }
  return refine_pairs(heaviness_matrix(table, mode), k_low, k_high);
}

}  // namespace bisectorlab
