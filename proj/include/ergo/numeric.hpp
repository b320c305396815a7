#pragma once

// Scalar support for the two numeric modes: exact rationals (GMP) and binary64.
//
// Every comparison that decides an inequality from the theory goes through
// at_least / at_most so that the binary64 mode applies one absolute tolerance
// consistently, while the rational mode stays exact.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace ergo {

using Rational = mpq_class;

inline constexpr double kAbsTol = 1e-9;

// Parses "p/q", "p", a decimal such as "-2.5" or "1.5e-3" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// num/den in lowest terms; den != 0.
inline Rational make_rational(long num, long den) {
  Rational q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

// The shortest decimal that round-trips to x, as a rational: decimal(0.1) is
// 1/10. Parameters given as doubles enter the exact mode this way.
Rational decimal(double x);

// Exact conversion; every finite double is a dyadic rational.
inline Rational exact(double x) {
  Rational q(x);
  q.canonicalize();
  return q;
}

inline Rational magnitude(const Rational& q) { return abs(q); }
inline double magnitude(double x) { return std::abs(x); }

inline bool at_least(const Rational& a, const Rational& b) { return a >= b; }
inline bool at_least(double a, double b) { return a >= b - kAbsTol; }
inline bool at_most(const Rational& a, const Rational& b) { return a <= b; }
inline bool at_most(double a, double b) { return a <= b + kAbsTol; }

inline bool is_finite(const Rational&) { return true; }
inline bool is_finite(double x) { return std::isfinite(x); }

template <class T>
T scalar_from(const Rational& q);
template <>
inline Rational scalar_from<Rational>(const Rational& q) { return q; }
template <>
inline double scalar_from<double>(const Rational& q) { return q.get_d(); }

template <class T>
T scalar_from_double(double x);
template <>
inline Rational scalar_from_double<Rational>(double x) { return decimal(x); }
template <>
inline double scalar_from_double<double>(double x) { return x; }

// Divides an accumulated sum by a positive count.
inline Rational divide(const Rational& sum, std::uint64_t n) {
  Rational q = sum / Rational(static_cast<unsigned long>(n));
  q.canonicalize();
  return q;
}
inline double divide(double sum, std::uint64_t n) { return sum / static_cast<double>(n); }

// Smallest natural number >= x; throws OverflowError when it does not fit.
std::uint64_t ceil_to_u64(double x);
std::uint64_t ceil_to_u64(const Rational& x);

}  // namespace ergo
