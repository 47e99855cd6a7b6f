#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "expord/errors.hpp"

namespace expord {

using Integer = boost::multiprecision::mpz_int;

/// Exact rational scalar. GMP keeps values canonical: denominator > 0,
/// gcd(|num|, den) = 1. Everything in this library computes over these;
/// there is no floating point on any decision path.
using Rational = boost::multiprecision::mpq_rational;

using RatVector = std::vector<Rational>;

inline Rational make_rational(const Integer& num, const Integer& den) {
  // The (mpz, mpz) constructor canonicalizes; the string one does not.
  return Rational(num, den);
}

inline Rational rat(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// Canonical textual form: "p/q" in lowest terms, integers render as "p".
inline std::string render(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

/// Parses "p/q" (q != 0) or a finite decimal such as "0.125" into an exact
/// value. Decimals convert with a power-of-ten denominator and reduce.
inline Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto malformed = [&]() -> MalformedNumber { return MalformedNumber(original); };

  std::size_t pos = 0;
  auto read_sign = [&]() -> bool {
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negative = text[pos] == '-';
      ++pos;
    }
    return negative;
  };
  auto read_digits = [&]() -> std::string {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw malformed();
    return std::string(text.substr(start, pos - start));
  };

  const bool neg = read_sign();
  const std::string whole = read_digits();

  if (pos == text.size()) {
    Integer n(whole);
    return make_rational(neg ? -n : n, Integer(1));
  }

  if (text[pos] == '/') {
    ++pos;
    const bool den_neg = read_sign();
    const std::string den_digits = read_digits();
    if (pos != text.size()) throw malformed();
    Integer num(whole);
    Integer den(den_digits);
    if (den == 0) throw ZeroDenominator(original);
    if (neg) num = -num;
    if (den_neg) den = -den;
    return make_rational(num, den);
  }

  if (text[pos] == '.') {
    ++pos;
    const std::string frac = read_digits();
    if (pos != text.size()) throw malformed();
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer num = Integer(whole) * scale + Integer(frac);
    if (neg) num = -num;
    return make_rational(num, scale);
  }

  throw malformed();
}

inline Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational max_value(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational min_value(const Rational& a, const Rational& b) { return a < b ? a : b; }

}  // namespace expord
