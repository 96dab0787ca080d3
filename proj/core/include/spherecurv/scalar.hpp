#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace spherecurv {

// Exact scalar for the rational pipelines. Arbitrary precision so grid scans
// over squared curvature constants never overflow. Expression templates are
// off so arithmetic composes with the generic linear algebra.
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::backends::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

// Default absolute tolerance for float-mode equality tests. Overridable per
// CLI flag; exact mode ignores it.
inline constexpr double kDefaultTol = 1e-9;

template <class S>
S scalar_from_int(long v) {
  if constexpr (is_exact_v<S>) {
    return Rational(v);
  } else {
    return static_cast<S>(v);
  }
}

template <class S>
S scalar_from_fraction(long num, long den) {
  if constexpr (is_exact_v<S>) {
    return Rational(num, den);
  } else {
    return static_cast<S>(num) / static_cast<S>(den);
  }
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.template convert_to<double>(); }

template <class S>
S scalar_abs(const S& v) {
  using std::abs;
  return abs(v);
}

// Equality up to tolerance in float mode, exact in rational mode.
template <class S>
bool scalar_near(const S& a, const S& b, double tol) {
  if constexpr (is_exact_v<S>) {
    (void)tol;
    return a == b;
  } else {
    return std::abs(a - b) <= tol;
  }
}

// 17 significant digits round-trips any double.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_scalar(double v) { return format_double(v); }

// Rationals render as "num/den" everywhere (CSV and reports), integers as n/1.
inline std::string format_scalar(const Rational& v) {
  return numerator(v).str() + "/" + denominator(v).str();
}

// Parses "3", "-1/2", "0.25", "2.5e-3" into an exact rational. Decimal and
// exponent forms are converted exactly.
Rational parse_rational(const std::string& text);

template <class S>
S parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<S>) {
    return parse_rational(text);
  } else {
    size_t pos = text.find('/');
    if (pos != std::string::npos) {
      return std::stod(text.substr(0, pos)) / std::stod(text.substr(pos + 1));
    }
    return std::stod(text);
  }
}

}  // namespace spherecurv
