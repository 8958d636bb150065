#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "bisectorlab/error.hpp"

namespace bisectorlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

inline std::size_t hash_integer(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) + 0x51ed27u;
  const std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    hash_combine(h, static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
  }
  return h;
}

inline std::size_t hash_value(const Integer& z) { return hash_integer(z.get_mpz_t()); }

/// Relies on GMP keeping every mpq_class in lowest terms with a positive
/// denominator, so equal values hash equally.
inline std::size_t hash_value(const Rational& q) {
  std::size_t h = hash_integer(q.get_num_mpz_t());
  hash_combine(h, hash_integer(q.get_den_mpz_t()));
  return h;
}

/// "p/q" with q omitted when it is 1.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline std::string to_string(const Integer& z) { return z.get_str(10); }

inline bool parse_integer(std::string_view text, Integer& out) {
  if (text.empty()) return false;
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return out.set_str(digits, 10) == 0;
}

/// Accepts "p" or "p/q" in lowest terms with q > 0. Anything else is a
/// ParseError, because the on-disk format promises a unique spelling.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  Integer num;
  Integer den = 1;
  if (!parse_integer(text.substr(0, slash), num)) {
    fail(ErrorCode::ParseError, "bad rational numerator in '" + std::string(text) + "'");
  }
  if (slash != std::string_view::npos) {
    if (!parse_integer(text.substr(slash + 1), den) || den <= 0) {
      fail(ErrorCode::ParseError, "bad rational denominator in '" + std::string(text) + "'");
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
      fail(ErrorCode::ParseError, "rational '" + std::string(text) + "' is not in lowest terms");
    }
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace bisectorlab
