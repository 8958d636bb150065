#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "bisectorlab/error.hpp"
#include "bisectorlab/kernel.hpp"
#include "bisectorlab/rational.hpp"

namespace bisectorlab {

inline std::strong_ordering three_way(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}
inline std::strong_ordering three_way(const Quantized& a, const Quantized& b) { return a <=> b; }

template <Kernel K>
struct Point {
  typename K::Stored x;
  typename K::Stored y;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) {
    if (auto c = three_way(a.x, b.x); c != 0) return c;
    return three_way(a.y, b.y);
  }
};

/// Line a*x + b*y + c = 0 with the first nonzero of (a, b) equal to 1.
template <Kernel K>
struct CanonicalLine {
  typename K::Stored a;
  typename K::Stored b;
  typename K::Stored c;

  friend bool operator==(const CanonicalLine&, const CanonicalLine&) = default;
  friend auto operator<=>(const CanonicalLine& l, const CanonicalLine& r) {
    if (auto o = three_way(l.a, r.a); o != 0) return o;
    if (auto o = three_way(l.b, r.b); o != 0) return o;
    return three_way(l.c, r.c);
  }
};

/// Circle by center and squared radius (r2 > 0).
template <Kernel K>
struct CanonicalCircle {
  typename K::Stored cx;
  typename K::Stored cy;
  typename K::Stored r2;

  friend bool operator==(const CanonicalCircle&, const CanonicalCircle&) = default;
  friend auto operator<=>(const CanonicalCircle& l, const CanonicalCircle& r) {
    if (auto o = three_way(l.cx, r.cx); o != 0) return o;
    if (auto o = three_way(l.cy, r.cy); o != 0) return o;
    return three_way(l.r2, r.r2);
  }
};

template <Kernel K>
using CurveKey = std::variant<CanonicalLine<K>, CanonicalCircle<K>>;

template <Kernel K>
bool is_line(const CurveKey<K>& key) {
  return std::holds_alternative<CanonicalLine<K>>(key);
}

// Hashing -------------------------------------------------------------------

inline std::size_t hash_stored(const Rational& q) { return hash_value(q); }
inline std::size_t hash_stored(const Quantized& q) { return hash_value(q); }

template <Kernel K>
std::size_t hash_value(const Point<K>& p) {
  std::size_t h = hash_stored(p.x);
  hash_combine(h, hash_stored(p.y));
  return h;
}

template <Kernel K>
std::size_t hash_value(const CanonicalLine<K>& l) {
  std::size_t h = hash_stored(l.a);
  hash_combine(h, hash_stored(l.b));
  hash_combine(h, hash_stored(l.c));
  return h;
}

template <Kernel K>
std::size_t hash_value(const CanonicalCircle<K>& c) {
  std::size_t h = hash_stored(c.cx) ^ 0x2545f4914f6cdd1dULL;
  hash_combine(h, hash_stored(c.cy));
  hash_combine(h, hash_stored(c.r2));
  return h;
}

template <Kernel K>
std::size_t hash_value(const CurveKey<K>& k) {
  return std::visit([](const auto& v) { return hash_value(v); }, k);
}

struct GeomHash {
  template <class T>
  std::size_t operator()(const T& v) const {
    return hash_value(v);
  }
};

// Construction helpers --------------------------------------------------------

template <Kernel K>
Point<K> make_point(const K& k, const typename K::Scalar& x, const typename K::Scalar& y) {
  return Point<K>{k.store(x), k.store(y)};
}

inline Point<ExactKernel> make_point(long x, long y) {
  return Point<ExactKernel>{Rational(x), Rational(y)};
}

inline Point<ExactKernel> make_point(const Rational& x, const Rational& y) {
  return Point<ExactKernel>{x, y};
}

/// Normalizes (a, b, c) so the first nonzero of (a, b) becomes 1.
template <Kernel K>
CanonicalLine<K> canonical_line(typename K::Scalar a, typename K::Scalar b, typename K::Scalar c,
                                const K& k = {}) {
  using S = typename K::Scalar;
  if constexpr (K::exact) {
    if (sgn(a) != 0) {
      b /= a;
      c /= a;
      a = 1;
    } else if (sgn(b) != 0) {
      c /= b;
      b = 1;
    } else {
      fail(ErrorCode::DegeneratePair, "line with zero normal");
    }
    return CanonicalLine<K>{k.store(a), k.store(b), k.store(c)};
  } else {
    const S norm = std::hypot(a, b);
    if (!(norm > 0.0)) fail(ErrorCode::DegeneratePair, "line with zero normal");
    a /= norm;
    b /= norm;
    c /= norm;
    if (k.negligible(a, 1.0)) {
      c /= b;
      a = 0.0;
      b = 1.0;
    } else {
      b /= a;
      c /= a;
      a = 1.0;
    }
    return CanonicalLine<K>{k.store(a), k.store(b), k.store(c)};
  }
}

template <Kernel K>
typename K::Scalar squared_distance(const Point<K>& p, const Point<K>& q) {
  using S = typename K::Scalar;
  const S dx = K::value(p.x) - K::value(q.x);
  const S dy = K::value(p.y) - K::value(q.y);
  return S(dx * dx + dy * dy);
}

template <Kernel K>
CanonicalLine<K> perpendicular_bisector(const Point<K>& p, const Point<K>& q, const K& k = {}) {
  using S = typename K::Scalar;
  if (p == q) fail(ErrorCode::DegeneratePair, "bisector of a point with itself");
  const S& px = K::value(p.x);
  const S& py = K::value(p.y);
  const S& qx = K::value(q.x);
  const S& qy = K::value(q.y);
  // |x - p|^2 = |x - q|^2  <=>  2(q - p).x + |p|^2 - |q|^2 = 0
  S a = 2 * (qx - px);
  S b = 2 * (qy - py);
  S c = px * px + py * py - qx * qx - qy * qy;
  return canonical_line<K>(std::move(a), std::move(b), std::move(c), k);
}

template <Kernel K>
CanonicalLine<K> line_through(const Point<K>& p, const Point<K>& q, const K& k = {}) {
  using S = typename K::Scalar;
  if (p == q) fail(ErrorCode::DegeneratePair, "line through a repeated point");
  const S& px = K::value(p.x);
  const S& py = K::value(p.y);
  S a = K::value(p.y) - K::value(q.y);
  S b = K::value(q.x) - K::value(p.x);
  S c = -(a * px + b * py);
  return canonical_line<K>(std::move(a), std::move(b), std::move(c), k);
}

template <Kernel K>
CanonicalCircle<K> circle_through(const Point<K>& p, const Point<K>& q, const Point<K>& r,
                                  const K& k = {}) {
  using S = typename K::Scalar;
  if (p == q || q == r || p == r) fail(ErrorCode::DegeneratePair, "circle through repeated points");
  const S ux = K::value(q.x) - K::value(p.x);
  const S uy = K::value(q.y) - K::value(p.y);
  const S vx = K::value(r.x) - K::value(p.x);
  const S vy = K::value(r.y) - K::value(p.y);
  const S cross = ux * vy - uy * vx;
  S scale{};
  if constexpr (!K::exact) scale = std::hypot(ux, uy) * std::hypot(vx, vy);
  if (k.negligible(cross, scale)) fail(ErrorCode::Collinear, "circle through collinear points");
  // Center relative to p solves 2 M c = (|u|^2, |v|^2) with rows u, v.
  const S uu = ux * ux + uy * uy;
  const S vv = vx * vx + vy * vy;
  const S d = 2 * cross;
  const S ox = (vy * uu - uy * vv) / d;
  const S oy = (ux * vv - vx * uu) / d;
  S cx = K::value(p.x) + ox;
  S cy = K::value(p.y) + oy;
  S r2 = ox * ox + oy * oy;
  return CanonicalCircle<K>{k.store(cx), k.store(cy), k.store(r2)};
}

template <Kernel K>
Point<K> reflect_over_line(const Point<K>& p, const CanonicalLine<K>& l, const K& k = {}) {
  using S = typename K::Scalar;
  const S& a = K::value(l.a);
  const S& b = K::value(l.b);
  const S& x = K::value(p.x);
  const S& y = K::value(p.y);
  const S t = (a * x + b * y + K::value(l.c)) / (a * a + b * b);
  S rx = x - 2 * t * a;
  S ry = y - 2 * t * b;
  return Point<K>{k.store(rx), k.store(ry)};
}

template <Kernel K>
bool on_line(const Point<K>& p, const CanonicalLine<K>& l, const K& k = {}) {
  using S = typename K::Scalar;
  const S t1 = K::value(l.a) * K::value(p.x);
  const S t2 = K::value(l.b) * K::value(p.y);
  const S residual = t1 + t2 + K::value(l.c);
  S scale{};
  if constexpr (!K::exact) scale = std::abs(t1) + std::abs(t2) + std::abs(K::value(l.c));
  return k.incident(residual, scale);
}

template <Kernel K>
bool on_circle(const Point<K>& p, const CanonicalCircle<K>& c, const K& k = {}) {
  using S = typename K::Scalar;
  const S dx = K::value(p.x) - K::value(c.cx);
  const S dy = K::value(p.y) - K::value(c.cy);
  const S residual = dx * dx + dy * dy - K::value(c.r2);
  S scale{};
  if constexpr (!K::exact) scale = K::value(c.r2);
  return k.incident(residual, scale);
}

template <Kernel K>
bool on_curve(const Point<K>& p, const CurveKey<K>& key, const K& k = {}) {
  return std::visit(
      [&](const auto& curve) {
        if constexpr (std::is_same_v<std::decay_t<decltype(curve)>, CanonicalLine<K>>) {
          return on_line(p, curve, k);
        } else {
          return on_circle(p, curve, k);
        }
      },
      key);
}

// Point sets ------------------------------------------------------------------

/// Finite set of distinct points with stable indices. The kernel instance
/// travels with the set so downstream algorithms build keys consistently.
template <Kernel K>
class PointSet {
 public:
  using kernel_type = K;
  using point_type = Point<K>;

  PointSet() = default;

  explicit PointSet(std::vector<Point<K>> points, K kernel = {})
      : kernel_(std::move(kernel)), points_(std::move(points)) {
    if (points_.empty()) fail(ErrorCode::EmptySet, "a point set needs at least one point");
    index_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!index_.emplace(points_[i], i).second) {
        fail(ErrorCode::DuplicatePoint, "duplicate point at index " + std::to_string(i));
      }
    }
    fingerprint_ = points_.size();
    for (const auto& p : points_) hash_combine(fingerprint_, hash_value(p));
  }

  const K& kernel() const { return kernel_; }
  std::size_t size() const { return points_.size(); }
  const Point<K>& operator[](std::size_t i) const { return points_[i]; }
  const Point<K>& at(std::size_t i) const {
    if (i >= points_.size()) fail(ErrorCode::IndexOutOfRange, "point index " + std::to_string(i));
    return points_[i];
  }
  std::span<const Point<K>> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  std::optional<std::size_t> index_of(const Point<K>& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Order-sensitive digest used to tie derived structures to their source.
  std::size_t fingerprint() const { return fingerprint_; }

 private:
  K kernel_{};
  std::vector<Point<K>> points_;
  std::unordered_map<Point<K>, std::size_t, GeomHash> index_;
  std::size_t fingerprint_ = 0;
};

template <Kernel K>
PointSet<QuantizedFloatKernel> to_qfloat(const PointSet<K>& set, QuantizedFloatKernel kernel = {}) {
  std::vector<Point<QuantizedFloatKernel>> out;
  out.reserve(set.size());
  for (const auto& p : set) {
    double x;
    double y;
    if constexpr (K::exact) {
      x = K::value(p.x).get_d();
      y = K::value(p.y).get_d();
    } else {
      x = K::value(p.x);
      y = K::value(p.y);
    }
    out.push_back(make_point(kernel, x, y));
  }
  return PointSet<QuantizedFloatKernel>(std::move(out), kernel);
}

// Separation audit ------------------------------------------------------------

/// Keys of the quantized backend as integer grid vectors.
inline std::array<std::int64_t, 2> grid_key(const Point<QuantizedFloatKernel>& p) {
  return {p.x.key, p.y.key};
}
inline std::array<std::int64_t, 3> grid_key(const CanonicalLine<QuantizedFloatKernel>& l) {
  return {l.a.key, l.b.key, l.c.key};
}
inline std::array<std::int64_t, 3> grid_key(const CanonicalCircle<QuantizedFloatKernel>& c) {
  return {c.cx.key, c.cy.key, c.r2.key};
}
inline std::array<std::int64_t, 1> grid_key(const Quantized& q) { return {q.key}; }

struct SeparationAudit {
  bool passed = true;
  std::size_t keys = 0;
  // Smallest Chebyshev distance (grid units) between distinct keys, when one
  // at or below the threshold was found.
  std::optional<std::int64_t> closest;
  std::int64_t threshold = 10;

  void merge(const SeparationAudit& other) {
    passed = passed && other.passed;
    keys += other.keys;
    if (other.closest && (!closest || *other.closest < *closest)) closest = other.closest;
  }
};

/// Distinct keys must be more than `threshold` grid cells apart in every
/// pairing; otherwise a single geometric object may have been split in two.
template <std::size_t N>
SeparationAudit audit_separation(std::vector<std::array<std::int64_t, N>> keys,
                                 std::int64_t threshold = 10) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  SeparationAudit audit;
  audit.keys = keys.size();
  audit.threshold = threshold;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      if (keys[j][0] - keys[i][0] > threshold) break;
      std::int64_t dist = 0;
      for (std::size_t d = 0; d < N; ++d) {
        dist = std::max(dist, keys[j][d] > keys[i][d] ? keys[j][d] - keys[i][d] : keys[i][d] - keys[j][d]);
      }
      if (dist <= threshold) {
        audit.passed = false;
        if (!audit.closest || dist < *audit.closest) audit.closest = dist;
      }
    }
  }
  return audit;
}

template <class Range>
auto audit_objects(const Range& objects, std::int64_t threshold = 10) {
  using Key = decltype(grid_key(*std::begin(objects)));
  std::vector<Key> keys;
  for (const auto& o : objects) keys.push_back(grid_key(o));
  return audit_separation(std::move(keys), threshold);
}

inline void require_separated(const SeparationAudit& audit, const std::string& what) {
  if (!audit.passed) {
    fail(ErrorCode::SeparationViolation,
         what + ": distinct keys only " + std::to_string(audit.closest.value_or(0)) +
             " grid cells apart (threshold " + std::to_string(audit.threshold) + ")");
  }
}

template <Kernel K>
std::string to_string(const Point<K>& p) {
  return "(" + to_string(p.x) + ", " + to_string(p.y) + ")";
}

template <Kernel K>
std::string to_string(const CanonicalLine<K>& l) {
  return "line(" + to_string(l.a) + ", " + to_string(l.b) + ", " + to_string(l.c) + ")";
}

template <Kernel K>
std::string to_string(const CanonicalCircle<K>& c) {
  return "circle(" + to_string(c.cx) + ", " + to_string(c.cy) + "; " + to_string(c.r2) + ")";
}

}  // namespace bisectorlab

namespace bisectorlab {

template <Kernel K>
std::ostream& operator<<(std::ostream& os, const Point<K>& p) {
  return os << to_string(p);
}
template <Kernel K>
std::ostream& operator<<(std::ostream& os, const CanonicalLine<K>& l) {
  return os << to_string(l);
}
template <Kernel K>
std::ostream& operator<<(std::ostream& os, const CanonicalCircle<K>& c) {
  return os << to_string(c);
}

}  // namespace bisectorlab
