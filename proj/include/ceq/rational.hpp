// Exact rational arithmetic used throughout the library, plus the canonical
// "num/den" text form required by the file interfaces.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ceq {

// et_off: plain value semantics (a + b is a Rational, not an expression
// template), so the type composes with std::min and friends.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

inline int sign(const Rational& r) { return r.sign(); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// 2^-j as an exact rational (j >= 0).
inline Rational pow2_neg(unsigned j) {
  BigInt den = BigInt(1) << j;
  return Rational(1, den);
}

// Canonical serialization: always "num/den", lowest terms, den > 0.
inline std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "num/den" or a bare integer string.
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
    BigInt num{std::string(s.substr(0, slash))};
    BigInt den{std::string(s.substr(slash + 1))};
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  }
}

// Floats in reports carry 17 significant digits so round-trips are exact.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace ceq
