#pragma once

// Helpers that let the algorithms stay generic over `double` and `Real`.
// Constants are always built "like" an existing value so that a Real keeps
// the precision of the data it is combined with.

#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "baryiter/real.hpp"

namespace baryiter {

template <class T>
concept RealScalar = requires(T a, T b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  { a < b } -> std::convertible_to<bool>;
};

inline Real like(const Real& ref, long v) { return Real(v, ref.precision()); }
inline double like(double, long v) { return static_cast<double>(v); }

inline Real like(const Real& ref, std::string_view decimal) {
  return Real::parse(decimal, ref.precision());
}
inline double like(double, std::string_view decimal) {
  std::string s(decimal);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::ParseError, "not a decimal number: '" + s + "'");
  }
  return v;
}

/// Re-rounds `v` to the precision of `ref`.
inline Real adopt(const Real& v, const Real& ref) { return v.with_precision(ref.precision()); }
inline double adopt(double v, double) { return v; }

inline long precision_bits(const Real& x) { return x.precision_bits(); }
inline long precision_bits(double) { return 53; }

inline Real pow2_like(const Real& ref, long e) { return Real::pow2(e, ref.precision()); }
inline double pow2_like(double, long e) { return std::ldexp(1.0, static_cast<int>(e)); }

inline bool is_finite(const Real& x) { return x.is_finite(); }
inline bool is_finite(double x) { return std::isfinite(x); }

inline double to_double(const Real& x) { return x.to_double(); }
inline double to_double(double x) { return x; }

inline std::string to_decimal(const Real& x, std::size_t digits) { return x.to_decimal(digits); }
inline std::string to_decimal(double x, std::size_t digits) {
  return Real(x, Precision(64)).to_decimal(digits);
}

inline Real abs_value(const Real& x) { return abs(x); }
inline double abs_value(double x) { return std::fabs(x); }

/// Rounds to a run's working precision; identity for double.
inline Real at_precision(const Real& v, long bits) { return v.with_precision(checked_precision(bits)); }
inline double at_precision(double v, long) { return v; }

/// Default convergence threshold 2^-(0.3 * bits), i.e. 10^-(0.3 * bits * log10 2).
template <class T>
T default_tolerance(const T& like_value) {
  return pow2_like(like_value, -static_cast<long>(0.3 * static_cast<double>(precision_bits(like_value))));
}

/// Scalar precision as a Precision value (53 bits is reported for double).
template <class T>
Precision precision_of(const T& x) {
  return Precision(precision_bits(x));
}

}  // namespace baryiter
