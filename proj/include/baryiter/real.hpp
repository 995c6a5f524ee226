#pragma once

// Configurable-precision real scalar backed by MPFR.
//
// Every Real carries its own mantissa width. Arithmetic between two Reals of
// different widths throws PrecisionMismatch; results inherit the operand
// width. Rounding is always round-to-nearest-even.

#include <mpfr.h>

#include <cmath>
#include <concepts>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "baryiter/error.hpp"

namespace baryiter {

/// Mantissa width in bits.
struct Precision {
  long bits = kDefault;

  static constexpr long kMin = 64;
  static constexpr long kDefault = 256;
  static constexpr long kTable = 512;
  static constexpr long kReference = 1024;

  constexpr Precision() = default;
  explicit constexpr Precision(long b) : bits(b) {}

  friend constexpr bool operator==(Precision, Precision) = default;
};

inline Precision checked_precision(long bits) {
  if (bits < Precision::kMin || bits > static_cast<long>(MPFR_PREC_MAX)) {
    throw Error(ErrorCode::InvalidPrecision,
                "precision must be at least " + std::to_string(Precision::kMin) + " bits, got " +
                    std::to_string(bits));
  }
  return Precision(bits);
}

enum class Elementary { Cos, Sin, Exp, Log, Sqrt, PowInt };

class Real {
 public:
  Real() : Real(0L, Precision()) {}

  Real(long value, Precision p) {
    init(p);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  Real(int value, Precision p) : Real(static_cast<long>(value), p) {}

  Real(double value, Precision p) {
    init(p);
    mpfr_set_d(v_, value, MPFR_RNDN);
  }

  /// Parses a decimal (or "inf"/"nan") literal, correctly rounded.
  static Real parse(std::string_view text, Precision p) {
    Real r(0L, p);
    std::string s(text);
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw Error(ErrorCode::ParseError, "not a decimal number: '" + s + "'");
    }
    return r;
  }

  /// 2^exponent, exact.
  static Real pow2(long exponent, Precision p) {
    Real r(0L, p);
    mpfr_set_ui_2exp(r.v_, 1, exponent, MPFR_RNDN);
    return r;
  }

  static Real pi(Precision p) {
    Real r(0L, p);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  static Real nan(Precision p) {
    Real r(0L, p);
    mpfr_set_nan(r.v_);
    return r;
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }

  // Assignment replaces both value and precision.
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  Precision precision() const { return Precision(static_cast<long>(mpfr_get_prec(v_))); }
  long precision_bits() const { return static_cast<long>(mpfr_get_prec(v_)); }

  /// Explicit re-rounding to another width; the only way to change precision.
  Real with_precision(Precision p) const {
    Real r(0L, p);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Digits needed so that a decimal string round-trips this precision.
  std::size_t full_digits() const { return mpfr_get_str_ndigits(10, mpfr_get_prec(v_)); }

  /// Scientific notation `d.ddd...e±nn` with `digits` significant digits.
  std::string to_decimal(std::size_t digits) const {
    if (digits == 0) digits = 1;
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
    bool negative = mpfr_signbit(v_) != 0 && !mpfr_zero_p(v_);
    std::string mantissa;
    long exp10 = 0;
    if (mpfr_zero_p(v_)) {
      mantissa.assign(digits, '0');
      exp10 = 1;
    } else {
      mpfr_exp_t e = 0;
      char* raw = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
      mantissa = raw;
      mpfr_free_str(raw);
      if (!mantissa.empty() && mantissa.front() == '-') mantissa.erase(0, 1);
      exp10 = static_cast<long>(e);
    }
    std::string out;
    if (negative) out += '-';
    out += mantissa.front();
    if (mantissa.size() > 1) {
      out += '.';
      out.append(mantissa, 1, std::string::npos);
    }
    long shown = exp10 - 1;
    out += 'e';
    out += shown < 0 ? '-' : '+';
    std::string e = std::to_string(shown < 0 ? -shown : shown);
    if (e.size() < 2) e.insert(0, "0");
    out += e;
    return out;
  }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return apply(o, mpfr_add); }
  Real& operator-=(const Real& o) { return apply(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return apply(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return apply(o, mpfr_div); }

  template <std::integral I>
  Real& operator+=(I k) { mpfr_add_si(v_, v_, static_cast<long>(k), MPFR_RNDN); return *this; }
  template <std::integral I>
  Real& operator-=(I k) { mpfr_sub_si(v_, v_, static_cast<long>(k), MPFR_RNDN); return *this; }
  template <std::integral I>
  Real& operator*=(I k) { mpfr_mul_si(v_, v_, static_cast<long>(k), MPFR_RNDN); return *this; }
  template <std::integral I>
  Real& operator/=(I k) { mpfr_div_si(v_, v_, static_cast<long>(k), MPFR_RNDN); return *this; }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  template <std::integral I> friend Real operator+(Real a, I k) { return a += k; }
  template <std::integral I> friend Real operator+(I k, Real a) { return a += k; }
  template <std::integral I> friend Real operator-(Real a, I k) { return a -= k; }
  template <std::integral I> friend Real operator-(I k, Real a) {
    mpfr_si_sub(a.v_, static_cast<long>(k), a.v_, MPFR_RNDN);
    return a;
  }
  template <std::integral I> friend Real operator*(Real a, I k) { return a *= k; }
  template <std::integral I> friend Real operator*(I k, Real a) { return a *= k; }
  template <std::integral I> friend Real operator/(Real a, I k) { return a /= k; }
  template <std::integral I> friend Real operator/(I k, Real a) {
    mpfr_si_div(a.v_, static_cast<long>(k), a.v_, MPFR_RNDN);
    return a;
  }

  // Comparisons are exact on the stored values and ignore precision.
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  template <std::integral I> friend bool operator==(const Real& a, I k) {
    return !mpfr_nan_p(a.v_) && mpfr_cmp_si(a.v_, static_cast<long>(k)) == 0;
  }
  template <std::integral I> friend bool operator<(const Real& a, I k) {
    return !mpfr_nan_p(a.v_) && mpfr_cmp_si(a.v_, static_cast<long>(k)) < 0;
  }
  template <std::integral I> friend bool operator>(const Real& a, I k) {
    return !mpfr_nan_p(a.v_) && mpfr_cmp_si(a.v_, static_cast<long>(k)) > 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const Real& r) {
    return os << r.to_decimal(static_cast<std::size_t>(os.precision()));
  }

 private:
  void init(Precision p) { mpfr_init2(v_, checked_precision(p.bits).bits); }

  template <class Op>
  Real& apply(const Real& o, Op op) {
    if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) {
      throw Error(ErrorCode::PrecisionMismatch,
                  "operands carry " + std::to_string(mpfr_get_prec(v_)) + " and " +
                      std::to_string(mpfr_get_prec(o.v_)) + " bits");
    }
    op(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

namespace detail {
template <class Fn>
Real unary(const Real& x, Fn fn) {
  Real r(0L, x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline Real abs(const Real& x) { return detail::unary(x, mpfr_abs); }
inline Real cos(const Real& x) { return detail::unary(x, mpfr_cos); }
inline Real sin(const Real& x) { return detail::unary(x, mpfr_sin); }
inline Real exp(const Real& x) { return detail::unary(x, mpfr_exp); }

inline Real sqrt(const Real& x) {
  if (x < 0) throw Error(ErrorCode::DomainError, "sqrt of negative value " + x.to_decimal(17));
  return detail::unary(x, mpfr_sqrt);
}

inline Real log(const Real& x) {
  if (x.is_nan() || !(x > 0)) {
    throw Error(ErrorCode::DomainError, "log of non-positive value " + x.to_decimal(17));
  }
  return detail::unary(x, mpfr_log);
}

inline Real pow(const Real& x, long k) {
  Real r(0L, x.precision());
  mpfr_pow_si(r.get(), x.get(), k, MPFR_RNDN);
  return r;
}

inline bool isfinite(const Real& x) { return x.is_finite(); }

/// Dispatch by tag. `exponent` is used by PowInt only.
inline Real eval_elementary(Elementary fn, const Real& x, long exponent = 0) {
  switch (fn) {
    case Elementary::Cos: return cos(x);
    case Elementary::Sin: return sin(x);
    case Elementary::Exp: return exp(x);
    case Elementary::Log: return log(x);
    case Elementary::Sqrt: return sqrt(x);
    case Elementary::PowInt: return pow(x, exponent);
  }
  throw Error(ErrorCode::DomainError, "unknown elementary function");
}

}  // namespace baryiter
