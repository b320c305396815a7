#include "ergo/numeric.hpp"

#include <charconv>
#include <limits>
#include <system_error>

#include "ergo/errors.hpp"

namespace ergo {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidParameter("empty rational literal");
  if (const auto e = s.find_first_of("eE"); e != std::string::npos && s.find('/') == std::string::npos) {
    long exponent = 0;
    const auto tail = s.substr(e + 1);
    const auto* first = tail.data() + (!tail.empty() && tail.front() == '+' ? 1 : 0);
    const auto [end, ec] = std::from_chars(first, tail.data() + tail.size(), exponent);
    if (ec != std::errc() || end != tail.data() + tail.size() || e == 0 || exponent > 4000 || exponent < -4000)
      throw InvalidParameter("malformed exponent in '" + s + "'");
    Rational q = parse_rational(s.substr(0, e));
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent < 0)
      q /= p;
    else
      q *= p;
    q.canonicalize();
    return q;
  }
  const auto dot = s.find('.');
  if (dot != std::string::npos && s.find('/') == std::string::npos) {
    // Decimal literal: shift the point into the denominator.
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t scale = s.size() - dot - 1;
    if (scale == 0 || digits.empty() || digits == "-" || digits == "+")
      throw InvalidParameter("malformed decimal literal '" + s + "'");
    if (digits.front() == '+') digits.erase(0, 1);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw InvalidParameter("malformed decimal literal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(scale));
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (s.front() == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw InvalidParameter("malformed rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0) throw InvalidParameter("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational decimal(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("cannot convert a non-finite value to a rational");
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InvalidParameter("cannot format value as a decimal");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

std::uint64_t ceil_to_u64(double x) {
  if (std::isnan(x)) throw InvalidParameter("cannot take the ceiling of NaN");
  if (x <= 0.0) return 0;
  const double c = std::ceil(x);
  if (!(c < 18446744073709551616.0)) throw OverflowError("ceiling exceeds the 64-bit natural range");
  return static_cast<std::uint64_t>(c);
}

std::uint64_t ceil_to_u64(const Rational& x) {
  if (x <= 0) return 0;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  if (mpz_sizeinbase(c.get_mpz_t(), 2) > 64) throw OverflowError("ceiling exceeds the 64-bit natural range");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, c.get_mpz_t());
  return out;
}

}  // namespace ergo
