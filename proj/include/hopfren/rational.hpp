#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "hopfren/error.hpp"

namespace hopfren {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) { return r.str(); }

// Parses "a", "-a" or "a/b". Used by the text formats and tests.
inline Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "invalid rational literal: '" + s + "'");
  }
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline BigInt rational_floor_int(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

// Binomial coefficient C(m, n) for rational m and non-negative integer n,
// as needed by the formal binomial series.
inline Rational rational_binomial(const Rational& m, unsigned n) {
  Rational result = 1;
  for (unsigned k = 0; k < n; ++k) {
    result *= (m - int(k));
    result /= int(k + 1);
  }
  return result;
}

inline std::int64_t factorial_i64(int n) {
  std::int64_t r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

} // namespace hopfren
