#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "isop/error.hpp"

namespace isop {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses an exact rational from `p/q`, an integer, or a decimal with an
/// optional exponent (`1.25`, `-3e-2`). Decimal input is converted exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw ParseError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  int scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') fail();
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i == text.size()) fail();
    int exponent = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4000) throw DomainError("exponent too large in '" + std::string(text) + "'");
    }
    scale += exp_negative ? -exponent : exponent;
  }
  Rational value(digits);
  BigInt ten_power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  if (scale < 0) {
    value /= Rational(ten_power);
  } else {
    value *= Rational(ten_power);
  }
  return negative ? Rational(-value) : value;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }

/// Exact rational value of a finite double.
inline Rational exact_rational(double x) { return Rational(x); }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace isop
