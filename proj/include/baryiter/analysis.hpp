#pragma once

// Convergence orders (theoretical and observed) and leading error factors.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "baryiter/optimise.hpp"

namespace baryiter {

enum class OrderFamily {
  Root,  // l = (m + 1) - m l^-(n+1)
  Opt,   // l^2 = 1 + m (l - l^-n)
};

struct OrderQuery {
  OrderFamily family = OrderFamily::Root;
  int m = 1;             // coinciding nodes per sample (1 derivative-free, 2 with f')
  std::optional<int> n;  // memory index; nullopt means n -> infinity
};

namespace detail {

struct OrderEquation {
  OrderFamily family;
  double m;
  double n;

  double value(double l) const {
    if (family == OrderFamily::Root) return l - (m + 1) + m * std::pow(l, -(n + 1));
    return l * l - 1 - m * l + m * std::pow(l, -n);
  }
  double slope(double l) const {
    if (family == OrderFamily::Root) return 1 - m * (n + 1) * std::pow(l, -(n + 2));
    return 2 * l - m - m * n * std::pow(l, -(n + 1));
  }
};

}  // namespace detail

/// Limit of the order as n -> infinity.
inline double order_limit(OrderFamily family, int m) {
  if (family == OrderFamily::Root) return m + 1.0;
  return (m + std::sqrt(4.0 + m * m)) / 2.0;
}

/// Largest real solution of the order equation. l = 1 always solves it; when
/// that is also the largest solution (a double root) the row is degenerate and
/// 1 is returned.
inline double theoretical_order(const OrderQuery& q) {
  if (q.m < 1) throw Error(ErrorCode::InvalidConfig, "m must be >= 1");
  const double limit = order_limit(q.family, q.m);
  if (!q.n) return limit;
  if (*q.n < 0) throw Error(ErrorCode::InvalidConfig, "n must be >= 0");
  const detail::OrderEquation eq{q.family, static_cast<double>(q.m), static_cast<double>(*q.n)};

  // The equation is convex in l and vanishes at 1. A non-negative slope there
  // means no root beyond 1.
  if (eq.slope(1.0) >= 0) return 1.0;

  // Minimum of the convex function splits [1, limit]; the wanted root lies in
  // (minimum, limit] where the function changes sign.
  double a = 1.0, b = limit;
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    double mid = 0.5 * (a + b);
    (eq.slope(mid) < 0 ? a : b) = mid;
  }
  double lo = b;
  double hi = limit;
  if (eq.value(hi) <= 0) return hi;

  double l = hi;
  for (int i = 0; i < 200; ++i) {
    double g = eq.value(l);
    if (g == 0) return l;
    (g > 0 ? hi : lo) = l;
    double d = eq.slope(l);
    double next = d > 0 ? l - g / d : lo - 1;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - l) <= 1e-15 * l) return next;
    l = next;
  }
  return l;
}

/// Residual of the defining equation at l.
inline double order_residual(const OrderQuery& q, double l) {
  if (!q.n) return 0.0;
  return detail::OrderEquation{q.family, static_cast<double>(q.m), static_cast<double>(*q.n)}.value(l);
}

namespace detail {

// Errors smaller than this carry too few correct bits to enter an order or
// error-factor estimate.
template <class T>
T error_floor(const IterationTrace<T>& trace) {
  const T& ref = *trace.reference;
  T scale = std::max(like(ref, 1), abs_value(ref));
  return pow2_like(ref, -(precision_bits(ref) - 32)) * scale;
}

template <class T>
bool usable_error(const std::optional<T>& e, const T& floor) {
  if (!e) return false;
  T a = abs_value(*e);
  return floor < a && a < like(a, 1);
}

inline double natural_log(double v) { return std::log(v); }
inline double natural_log(const Real& v) { return log(v).to_double(); }

}  // namespace detail

/// Mean of log|e_{i+1}| / log|e_i| over the last `k_last` consecutive pairs of
/// steps whose errors lie in (floor, 1).
template <class T>
double empirical_order(const IterationTrace<T>& trace, std::size_t k_last) {
  if (!trace.reference) throw Error(ErrorCode::InsufficientData, "trace has no reference solution");
  if (k_last == 0) throw Error(ErrorCode::InsufficientData, "k_last must be positive");
  const T floor = detail::error_floor(trace);
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
    const auto& a = trace.steps[i].error;
    const auto& b = trace.steps[i + 1].error;
    if (detail::usable_error(a, floor) && detail::usable_error(b, floor)) {
      ratios.push_back(detail::natural_log(abs_value(*b)) / detail::natural_log(abs_value(*a)));
    }
  }
  if (ratios.size() < k_last) {
    throw Error(ErrorCode::InsufficientData, "only " + std::to_string(ratios.size()) +
                                                  " usable error ratios, need " + std::to_string(k_last));
  }
  double sum = 0;
  for (std::size_t i = ratios.size() - k_last; i < ratios.size(); ++i) sum += ratios[i];
  return sum / static_cast<double>(k_last);
}

/// Mean log-ratio of a plain sequence of error magnitudes (all in (0, 1)).
inline double empirical_order(const std::vector<double>& magnitudes, std::size_t k_last) {
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < magnitudes.size(); ++i) {
    if (magnitudes[i] > 0 && magnitudes[i] < 1 && magnitudes[i + 1] > 0 && magnitudes[i + 1] < 1) {
      ratios.push_back(std::log(magnitudes[i + 1]) / std::log(magnitudes[i]));
    }
  }
  if (ratios.size() < k_last || k_last == 0) throw Error(ErrorCode::InsufficientData, "too few error ratios");
  double sum = 0;
  for (std::size_t i = ratios.size() - k_last; i < ratios.size(); ++i) sum += ratios[i];
  return sum / static_cast<double>(k_last);
}

/// Schemes with tabulated leading error factors. Suffix X/F names the weight
/// coordinate.
enum class ErrorScheme {
  ExactDFX,
  ExactDFF,
  ExactD1X,
  ExactD1F,
  NewtonXInterpX,
  NewtonXInterpF,
  NewtonFInterpX,
  NewtonFInterpF,
  CHXInterp,
  CHFInterp,
  OptNewtonDF,
  OptCHD1,
};

/// Coincidence multiplicity m of the scheme's error product.
constexpr int multiplicity(ErrorScheme s) {
  switch (s) {
    case ErrorScheme::ExactD1X:
    case ErrorScheme::ExactD1F:
    case ErrorScheme::CHXInterp:
    case ErrorScheme::CHFInterp:
    case ErrorScheme::OptCHD1:
      return 2;
    default:
      return 1;
  }
}

constexpr bool is_optimisation(ErrorScheme s) {
  return s == ErrorScheme::OptNewtonDF || s == ErrorScheme::OptCHD1;
}

/// Scheme identifier for a root method; secant and Newton map to the cells
/// they coincide with (window 2 derivative-free, window 1 Hermite).
inline std::optional<ErrorScheme> error_scheme_for(RootMethod m, WeightScheme w) {
  const bool x = w == WeightScheme::XBased;
  switch (m) {
    case RootMethod::ExactDF: return x ? ErrorScheme::ExactDFX : ErrorScheme::ExactDFF;
    case RootMethod::ExactD1: return x ? ErrorScheme::ExactD1X : ErrorScheme::ExactD1F;
    case RootMethod::NewtonXInterp: return x ? ErrorScheme::NewtonXInterpX : ErrorScheme::NewtonXInterpF;
    case RootMethod::NewtonFInterp: return x ? ErrorScheme::NewtonFInterpX : ErrorScheme::NewtonFInterpF;
    case RootMethod::CHXInterp: return ErrorScheme::CHXInterp;
    case RootMethod::CHFInterp: return ErrorScheme::CHFInterp;
    case RootMethod::Secant: return ErrorScheme::ExactDFX;
    case RootMethod::Newton: return ErrorScheme::ExactD1X;
    default: return std::nullopt;
  }
}

inline ErrorScheme error_scheme_for(OptMethod m) {
  return m == OptMethod::NewtonDF ? ErrorScheme::OptNewtonDF : ErrorScheme::OptCHD1;
}

template <class T>
struct ErrorFactorSpec {
  ErrorScheme scheme = ErrorScheme::ExactDFX;
  int n_plus_1 = 2;
  std::vector<T> derivatives;  // derivatives[k-1] is the k-th derivative at the solution
};

namespace detail {

template <class T>
const T& nth_derivative(const ErrorFactorSpec<T>& spec, std::size_t k) {
  if (spec.derivatives.size() < k) {
    throw Error(ErrorCode::InvalidConfig, "error factor needs derivative order " + std::to_string(k));
  }
  return spec.derivatives[k - 1];
}

[[noreturn]] inline void unsupported(int n_plus_1) {
  throw Error(ErrorCode::UnsupportedCell, "no tabulated factor for n+1 = " + std::to_string(n_plus_1));
}

inline long factorial(int k) {
  long r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace detail

/// Leading error factor assembled from derivatives at the solution, for the
/// cells that have a printed closed form.
template <class T>
T predicted_error_factor(const ErrorFactorSpec<T>& spec) {
  const int cell = spec.n_plus_1;
  auto d = [&](std::size_t k) -> const T& { return detail::nth_derivative(spec, k); };

  if (is_optimisation(spec.scheme)) {
    const T& phi2 = d(2);
    if (phi2 == 0) throw Error(ErrorCode::InvalidConfig, "phi'' vanishes at the stationary point");
    if (spec.scheme == ErrorScheme::OptNewtonDF) {
      if (cell < 2) detail::unsupported(cell);
      const int n = cell - 1;
      T factor = d(static_cast<std::size_t>(cell)) / phi2 / detail::factorial(cell);
      return n % 2 == 0 ? factor : -factor;
    }
    if (cell == 3) return -2 * d(6) / (detail::factorial(6) * phi2);
    if (cell == 4) return -2 * d(8) / (detail::factorial(8) * phi2);
    detail::unsupported(cell);
  }

  const T& f1 = d(1);
  if (f1 == 0) throw Error(ErrorCode::InvalidConfig, "f' vanishes at the root (not a simple root)");
  auto secant_like = [&] { return d(2) / (2 * f1); };
  auto three = [&](long c22) { return (c22 * d(2) * d(2) - 2 * f1 * d(3)) / (12 * f1 * f1); };
  auto four = [&](long c222, long c123) {
    return (c222 * d(2) * d(2) * d(2) - c123 * f1 * d(2) * d(3) + f1 * f1 * d(4)) / (24 * f1 * f1 * f1);
  };

  switch (spec.scheme) {
    case ErrorScheme::ExactDFX:
    case ErrorScheme::NewtonXInterpX:
      if (cell == 2) return secant_like();
      if (cell == 3) return three(3);
      if (cell == 4) return four(3, 4);
      break;
    case ErrorScheme::ExactDFF:
    case ErrorScheme::NewtonXInterpF:
      if (cell == 2) return secant_like();
      if (cell == 3) return three(6);
      if (cell == 4) return four(15, 10);
      break;
    case ErrorScheme::NewtonFInterpX:
      if (cell == 2) return secant_like();
      if (cell == 3) return -d(3) / (6 * f1);
      if (cell == 4) return d(4) / (24 * f1);
      break;
    case ErrorScheme::NewtonFInterpF:
      if (cell == 2) return secant_like();
      if (cell == 3) return three(3);
      if (cell == 4) return four(6, 6);
      break;
    case ErrorScheme::ExactD1X:
      if (cell == 1) return secant_like();
      if (cell == 2) return four(3, 4);
      break;
    case ErrorScheme::ExactD1F:
    case ErrorScheme::CHXInterp:
      if (cell == 1) return secant_like();
      if (cell == 2) return four(15, 10);
      break;
    case ErrorScheme::CHFInterp:
      if (cell == 1) return secant_like();
      if (cell == 2) return d(4) / (24 * f1);
      break;
    default:
      break;
  }
  detail::unsupported(cell);
}

/// Two-term leading error of the first-derivative optimisation scheme with a
/// two-sample window:
///   e2 ~ -(2 phi4 / 4! phi2) e0^2 e1 + (phi3 / 2 phi2) e1^2
template <class T>
T chd1_window2_error(const T& e0, const T& e1, const std::vector<T>& derivatives) {
  if (derivatives.size() < 4) throw Error(ErrorCode::InvalidConfig, "need derivatives up to order 4");
  const T& phi2 = derivatives[1];
  const T& phi3 = derivatives[2];
  const T& phi4 = derivatives[3];
  return -2 * phi4 / (24 * phi2) * e0 * e0 * e1 + phi3 / (2 * phi2) * e1 * e1;
}

/// Largest relative deviation of the observed error ratio from the predicted
/// factor over the last `window_tail` steps taken with a full window.
/// Root schemes:  e_{k+1} / prod_{i=k-n}^{k} e_i^m
/// Optimisation:  e_{k+1} / (e_k^{m-1} prod_{i=k-n}^{k-1} e_i^m)
template <class T>
T verify_error_factor(const IterationTrace<T>& trace, const ErrorFactorSpec<T>& spec,
                      std::size_t window_tail) {
  if (!trace.reference) throw Error(ErrorCode::InsufficientData, "trace has no reference solution");
  const T predicted = predicted_error_factor(spec);
  if (predicted == 0) throw Error(ErrorCode::InsufficientData, "predicted factor is zero");
  const std::size_t width = static_cast<std::size_t>(spec.n_plus_1);
  const int m = multiplicity(spec.scheme);
  const bool opt = is_optimisation(spec.scheme);
  const T floor = detail::error_floor(trace);

  std::vector<T> deviations;
  for (std::size_t j = trace.steps.size(); j-- > width && deviations.size() < window_tail;) {
    const auto& target = trace.steps[j];
    if (target.window_used != width || target.status == StepStatus::SingularStepFallback) continue;
    bool usable = detail::usable_error(target.error, floor);
    for (std::size_t i = j - width; i < j && usable; ++i) usable = detail::usable_error(trace.steps[i].error, floor);
    if (!usable) continue;
    T denom = like(predicted, 1);
    for (std::size_t i = j - width; i < j; ++i) {
      const T& e = *trace.steps[i].error;
      const bool newest = i == j - 1;
      const int power = (opt && newest) ? m - 1 : m;
      for (int p = 0; p < power; ++p) denom *= e;
    }
    T ratio = *target.error / denom;
    deviations.push_back(abs_value(ratio / predicted - 1));
  }
  if (deviations.size() < window_tail) {
    throw Error(ErrorCode::InsufficientData, "only " + std::to_string(deviations.size()) +
                                                  " usable full-window steps, need " + std::to_string(window_tail));
  }
  T worst = deviations.front();
  for (const auto& d : deviations) {
    if (worst < d) worst = d;
  }
  return worst;
}

}  // namespace baryiter
