// Exact integer/rational arithmetic and fixed-point decimal rendering.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stickers {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Raised when an arbitrary-precision evaluation leaves its certified range
// or a truncated sweep cannot certify its tail.
class precision_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Integer pow10(int e) {
  if (e < 0) throw std::invalid_argument("pow10 needs a non-negative exponent");
  Integer r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

// Parses a plain decimal literal ("4", "-0.25", "3.50") into an exact rational.
inline Rational parse_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty decimal literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal literal");
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument(std::string("malformed decimal literal: ") + std::string(text));
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal literal");
  // A leading zero would make the string constructor read the rest as octal.
  std::size_t first_nonzero = digits.find_first_not_of('0');
  Integer mantissa(first_nonzero == std::string::npos ? "0" : digits.substr(first_nonzero));
  if (negative) mantissa = -mantissa;
  return Rational(mantissa, pow10(frac_digits));
}

// value * 10^places rounded to the nearest integer, ties to even.
inline Integer round_scaled_half_even(const Rational& value, int places) {
  Rational scaled = value * Rational(pow10(places));
  Integer num = numerator(scaled);
  Integer den = denominator(scaled);  // > 0, canonical
  bool negative = num < 0;
  if (negative) num = -num;
  Integer q = num / den;
  Integer r = num % den;
  Integer twice = r * 2;
  if (twice > den || (twice == den && (q & 1) == 1)) ++q;
  return negative ? Integer(-q) : q;
}

// Fixed-point decimal string at `places` digits, round-half-even.
inline std::string render_fixed(const Rational& value, int places) {
  Integer scaled = round_scaled_half_even(value, places);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  std::string out;
  if (places == 0) {
    out = digits;
  } else {
    if (static_cast<int>(digits.size()) <= places)
      digits.insert(0, places + 1 - digits.size(), '0');
    out = digits.substr(0, digits.size() - places) + "." + digits.substr(digits.size() - places);
  }
  if (negative && scaled != 0) out.insert(0, 1, '-');
  return out;
}

inline double to_double(const Rational& value) { return value.template convert_to<double>(); }

// Exact conversion: every finite double is a rational.
inline Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  Rational r;
  mpq_set_d(r.backend().data(), value);
  return r;
}

}  // namespace stickers
