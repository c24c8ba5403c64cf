#pragma once

// Numeric backends for the solver: IEEE double (default for concurrent
// games, where values may be irrational) and exact arbitrary-precision
// rationals (required for turn-based solving and denominator-bound checks).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace csg {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class V>
inline constexpr bool is_rational_backend = std::is_same_v<V, Rational>;

/// Comparison helper. `tol` is zero in rational mode (exact comparisons)
/// and tau_eq in floating mode; a strict test `gt(a,b)` means a > b + tol.
template <class V>
struct Cmp {
  V tol{};

  bool gt(const V& a, const V& b) const { return a > b + tol; }
  bool lt(const V& a, const V& b) const { return b > a + tol; }
  bool ge(const V& a, const V& b) const { return !lt(a, b); }
  bool le(const V& a, const V& b) const { return !gt(a, b); }
  bool eq(const V& a, const V& b) const { return !gt(a, b) && !lt(a, b); }
  bool ne(const V& a, const V& b) const { return !eq(a, b); }
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.template convert_to<double>(); }

/// Exact conversion from a double (every finite double is a dyadic rational).
template <class V>
V from_double(double x) {
  if constexpr (is_rational_backend<V>) {
    return Rational(x);
  } else {
    return x;
  }
}

namespace detail {

inline int count_significant_digits(const std::string& digits) {
  // digits: decimal digit string, possibly with leading/trailing zeros
  std::size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 0;
  std::size_t last = digits.find_last_not_of('0');
  return static_cast<int>(last - first + 1);
}

inline Rational parse_decimal_rational(const std::string& s) {
  // [+-]?digits[.digits][eE[+-]digits]
  std::string t = s;
  bool neg = false;
  std::size_t pos = 0;
  if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
    neg = t[pos] == '-';
    ++pos;
  }
  std::string int_part, frac_part;
  while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) int_part += t[pos++];
  if (pos < t.size() && t[pos] == '.') {
    ++pos;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) frac_part += t[pos++];
  }
  long exp10 = 0;
  if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
      eneg = t[pos] == '-';
      ++pos;
    }
    if (pos >= t.size()) throw std::invalid_argument("bad number: '" + s + "'");
    long e = 0;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
      e = e * 10 + (t[pos] - '0');
      ++pos;
    }
    exp10 = eneg ? -e : e;
  }
  if (pos != t.size() || (int_part.empty() && frac_part.empty()))
    throw std::invalid_argument("bad number: '" + s + "'");
  if (count_significant_digits(int_part + frac_part) > 18)
    throw std::invalid_argument("decimal '" + s + "' exceeds 18 significant digits in rational mode");
  BigInt num = 0;
  for (char c : int_part + frac_part) num = num * 10 + (c - '0');
  long scale = static_cast<long>(frac_part.size()) - exp10;
  Rational r(num, 1);
  BigInt ten = 10;
  if (scale > 0) {
    BigInt d = 1;
    for (long i = 0; i < scale; ++i) d *= ten;
    r = Rational(num, d);
  } else if (scale < 0) {
    BigInt m = 1;
    for (long i = 0; i < -scale; ++i) m *= ten;
    r = Rational(num * m, 1);
  }
  return neg ? Rational(-numerator(r), denominator(r)) : r;
}

}  // namespace detail

/// Parses "p/q" fractions or decimal strings into the backend's number type.
template <class V>
V parse_number(const std::string& s) {
  std::size_t slash = s.find('/');
  if constexpr (is_rational_backend<V>) {
    if (slash != std::string::npos) {
      std::string p = s.substr(0, slash), q = s.substr(slash + 1);
      if (p.empty() || q.empty()) throw std::invalid_argument("bad fraction: '" + s + "'");
      Rational r;
      try {
        r = Rational(BigInt(p), BigInt(q));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad fraction: '" + s + "'");
      }
      return r;
    }
    return detail::parse_decimal_rational(s);
  } else {
    if (slash != std::string::npos) {
      double p = std::stod(s.substr(0, slash));
      double q = std::stod(s.substr(slash + 1));
      if (q == 0.0) throw std::invalid_argument("zero denominator: '" + s + "'");
      return p / q;
    }
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number: '" + s + "'");
    return x;
  }
}

/// Fixed formatting: 15 significant digits for doubles, reduced "p/q" for
/// rationals (plain integer when the denominator is 1).
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string format_number(const Rational& v) {
  if (denominator(v) == 1) return numerator(v).str();
  return numerator(v).str() + "/" + denominator(v).str();
}

/// Number of bits needed to write n (0 takes one bit).
inline long long bit_size(const BigInt& n) {
  if (n == 0) return 1;
  return static_cast<long long>(boost::multiprecision::msb(boost::multiprecision::abs(n))) + 1;
}

/// Bit size of a probability: numerator bits plus denominator bits.
inline long long bit_size(const Rational& r) {
  return bit_size(numerator(r)) + bit_size(denominator(r));
}

inline long long bit_size(double x) { return bit_size(Rational(x)); }

}  // namespace csg
