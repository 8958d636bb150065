#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "bisectorlab/error.hpp"
#include "bisectorlab/rational.hpp"

namespace bisectorlab {

// A kernel fixes the coordinate arithmetic (`Scalar`) and the value kept in
// canonical objects (`Stored`). Equality, ordering and hashing of points,
// lines and circles go through `Stored`, so the kernel alone decides when two
// geometric objects are "the same".

/// Exact rational arithmetic. Stored values are the rationals themselves.
struct ExactKernel {
  using Scalar = Rational;
  using Stored = Rational;
  static constexpr bool exact = true;
  static constexpr std::string_view name = "exact";

  Stored store(const Scalar& v) const { return v; }
  static const Scalar& value(const Stored& s) { return s; }

  bool negligible(const Scalar& v, const Scalar& /*scale*/) const { return sgn(v) == 0; }
  bool incident(const Scalar& residual, const Scalar& /*scale*/) const { return sgn(residual) == 0; }
};

/// A double snapped to an integer grid. Identity is the grid index only.
struct Quantized {
  double value = 0.0;
  std::int64_t key = 0;

  friend bool operator==(const Quantized& a, const Quantized& b) { return a.key == b.key; }
  friend std::strong_ordering operator<=>(const Quantized& a, const Quantized& b) {
    return a.key <=> b.key;
  }
};

inline std::size_t hash_value(const Quantized& q) { return std::hash<std::int64_t>{}(q.key); }

/// Double-precision backend for configurations with irrational coordinates.
/// Canonical coefficients are rounded to a grid of spacing `grid`; results are
/// only trustworthy together with a passing separation audit.
struct QuantizedFloatKernel {
  using Scalar = double;
  using Stored = Quantized;
  static constexpr bool exact = false;
  static constexpr std::string_view name = "qfloat";

  double grid = 1e-9;
  // |component| of a unit normal below this is treated as zero when picking
  // the coefficient to normalize by.
  double zero_tolerance = 1e-6;
  // Relative residual accepted by incidence tests.
  double incidence_tolerance = 1e-7;

  Stored store(double v) const {
    const double scaled = std::nearbyint(v / grid);
    if (!std::isfinite(scaled) || std::abs(scaled) > 4.0e18) {
      std::ostringstream os;
      os << "value " << v << " does not fit the quantization grid " << grid;
      fail(ErrorCode::QuantizationRange, os.str());
    }
    return Quantized{v, static_cast<std::int64_t>(scaled)};
  }
  static double value(const Stored& s) { return s.value; }

  bool negligible(double v, double scale) const { return std::abs(v) <= zero_tolerance * scale; }
  bool incident(double residual, double scale) const {
    return std::abs(residual) <= incidence_tolerance * std::max(1.0, scale);
  }
};

template <class K>
concept Kernel = requires(const K& k, const typename K::Scalar& s, const typename K::Stored& st) {
  { k.store(s) } -> std::same_as<typename K::Stored>;
  { K::value(st) };
  { k.negligible(s, s) } -> std::same_as<bool>;
  { k.incident(s, s) } -> std::same_as<bool>;
  { K::exact } -> std::convertible_to<bool>;
};

inline std::string to_string(const Quantized& q) {
  std::ostringstream os;
  os.precision(17);
  os << q.value;
  return os.str();
}

}  // namespace bisectorlab
