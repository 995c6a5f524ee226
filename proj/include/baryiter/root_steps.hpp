#pragma once

// Single-step root iterations. A window is ordered oldest to newest; the
// newest sample (index n) is the point the local schemes expand about.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "baryiter/interpolants.hpp"

namespace baryiter {

namespace detail {

template <class T>
void require_size(std::span<const Sample<T>> window, std::size_t min, const char* what) {
  if (window.size() < min) {
    throw Error(ErrorCode::InvalidConfig,
                std::string(what) + " needs at least " + std::to_string(min) + " samples");
  }
}

template <class T>
void require_nonzero_residuals(std::span<const Sample<T>> window) {
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (window[i].f == 0) throw ExactRootHit(i);
  }
}

template <class T>
const T& derivative_at(const Sample<T>& s, std::size_t i) {
  if (!s.f_prime) {
    throw Error(ErrorCode::InvalidConfig, "sample " + std::to_string(i) + " carries no f'");
  }
  if (*s.f_prime == 0) {
    throw Error(ErrorCode::ZeroDerivative, "f' vanishes at sample " + std::to_string(i));
  }
  return *s.f_prime;
}

template <class T>
void require_weight_count(std::size_t weights, std::size_t samples) {
  if (weights != samples) throw Error(ErrorCode::InvalidConfig, "weight count does not match window");
}

template <class T>
void require_distinct(const T& a, const T& b, const char* coordinate) {
  if (a == b) {
    throw Error(ErrorCode::DegenerateNodes, std::string("repeated ") + coordinate + " value in window");
  }
}

}  // namespace detail

template <class T>
std::vector<T> x_values(std::span<const Sample<T>> window) {
  std::vector<T> v;
  v.reserve(window.size());
  for (const auto& s : window) v.push_back(s.x);
  return v;
}

template <class T>
std::vector<T> f_values(std::span<const Sample<T>> window) {
  std::vector<T> v;
  v.reserve(window.size());
  for (const auto& s : window) v.push_back(s.f);
  return v;
}

template <class T>
std::vector<T> f_prime_values(std::span<const Sample<T>> window) {
  std::vector<T> v;
  v.reserve(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) v.push_back(detail::derivative_at(window[i], i));
  return v;
}

/// Exact root of the derivative-free inverse interpolant:
///   x_{n+1} = sum(w_i x_i / f_i) / sum(w_i / f_i)
template <class T>
T step_exact_df(std::span<const Sample<T>> window, const WeightSet<T>& weights) {
  detail::require_size(window, 2, "step_exact_df");
  detail::require_weight_count<T>(weights.omega.size(), window.size());
  detail::require_nonzero_residuals(window);
  T num = like(window[0].x, 0);
  T den = like(window[0].x, 0);
  for (std::size_t i = 0; i < window.size(); ++i) {
    T term = weights.omega[i] / window[i].f;
    num += term * window[i].x;
    den += term;
  }
  if (den == 0) throw Error(ErrorCode::SingularStep, "sum of w_i/f_i vanishes");
  return num / den;
}

/// Exact root of the Hermite inverse interpolant:
///   x_{n+1} = sum([l_i (x_i - f_i/f'_i) - g_i f_i x_i] / f_i^2)
///           / sum([l_i - g_i f_i] / f_i^2)
template <class T>
T step_exact_d1(std::span<const Sample<T>> window, const HermiteWeightSet<T>& hweights) {
  detail::require_size(window, 1, "step_exact_d1");
  detail::require_weight_count<T>(hweights.lambda.size(), window.size());
  detail::require_nonzero_residuals(window);
  T num = like(window[0].x, 0);
  T den = like(window[0].x, 0);
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto& s = window[i];
    const T& fp = detail::derivative_at(s, i);
    T f2 = s.f * s.f;
    num += (hweights.lambda[i] * (s.x - s.f / fp) - hweights.gamma[i] * s.f * s.x) / f2;
    den += (hweights.lambda[i] - hweights.gamma[i] * s.f) / f2;
  }
  if (den == 0) throw Error(ErrorCode::SingularStep, "Hermite denominator vanishes");
  return num / den;
}

/// Weighted finite-difference estimate of 1/f' at the newest sample.
template <class T>
T inverse_slope_estimate(std::span<const Sample<T>> window, const WeightSet<T>& weights) {
  detail::require_size(window, 2, "inverse_slope_estimate");
  detail::require_weight_count<T>(weights.omega.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  T num = like(s_n.x, 0);
  T den = like(s_n.x, 0);
  for (std::size_t k = 0; k < n; ++k) {
    detail::require_distinct(s_n.f, window[k].f, "f");
    num += weights.omega[k] * (s_n.x - window[k].x) / (s_n.f - window[k].f);
    den += weights.omega[k];
  }
  if (den == 0) throw Error(ErrorCode::SingularStep, "sum of w_k (k != n) vanishes");
  return num / den;
}

/// Weighted finite-difference estimate of f' at the newest sample.
template <class T>
T direct_slope_estimate(std::span<const Sample<T>> window, const WeightSet<T>& weights) {
  detail::require_size(window, 2, "direct_slope_estimate");
  detail::require_weight_count<T>(weights.omega.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  T num = like(s_n.x, 0);
  T den = like(s_n.x, 0);
  for (std::size_t k = 0; k < n; ++k) {
    detail::require_distinct(s_n.x, window[k].x, "x");
    num += weights.omega[k] * (s_n.f - window[k].f) / (s_n.x - window[k].x);
    den += weights.omega[k];
  }
  if (den == 0) throw Error(ErrorCode::SingularStep, "sum of w_k (k != n) vanishes");
  return num / den;
}

/// f'' at the newest sample from the Hermite inverse interpolant x[f]
/// (f-based squared-product weights), via x'' = -f''/f'^3.
template <class T>
T second_derivative_x_interp(std::span<const Sample<T>> window, const HermiteWeightSet<T>& hweights) {
  detail::require_size(window, 1, "second_derivative_x_interp");
  detail::require_weight_count<T>(hweights.lambda.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  const T& fp_n = detail::derivative_at(s_n, n);
  if (hweights.lambda[n] == 0) throw Error(ErrorCode::SingularStep, "lambda_n vanishes");
  T acc = hweights.gamma[n] / fp_n;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s_k = window[k];
    const T& fp_k = detail::derivative_at(s_k, k);
    detail::require_distinct(s_n.f, s_k.f, "f");
    T dx = s_n.x - s_k.x;
    T df = s_n.f - s_k.f;
    acc += (hweights.lambda[k] * dx + (hweights.gamma[k] * dx - hweights.lambda[k] / fp_k) * df) / (df * df);
  }
  return 2 * fp_n * fp_n * fp_n / hweights.lambda[n] * acc;
}

/// f'' at the newest sample from the Hermite direct interpolant f[x]
/// (x-based squared-product weights).
template <class T>
T second_derivative_f_interp(std::span<const Sample<T>> window, const HermiteWeightSet<T>& hweights) {
  detail::require_size(window, 1, "second_derivative_f_interp");
  detail::require_weight_count<T>(hweights.lambda.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  if (!s_n.f_prime) throw Error(ErrorCode::InvalidConfig, "newest sample carries no f'");
  if (hweights.lambda[n] == 0) throw Error(ErrorCode::SingularStep, "lambda_n vanishes");
  T acc = hweights.gamma[n] * *s_n.f_prime;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s_k = window[k];
    if (!s_k.f_prime) throw Error(ErrorCode::InvalidConfig, "sample carries no f'");
    detail::require_distinct(s_n.x, s_k.x, "x");
    T dx = s_n.x - s_k.x;
    T df = s_n.f - s_k.f;
    acc += (hweights.lambda[k] * df + (hweights.gamma[k] * df - hweights.lambda[k] * *s_k.f_prime) * dx) / (dx * dx);
  }
  return -2 * acc / hweights.lambda[n];
}

/// Chebyshev-Halley family:
///   x - [(f'^2 + (1/2 - beta) f f'') / (f'^2 - beta f f'')] f / f'
/// beta = 0 Chebyshev, 1/2 Halley, 1 super-Halley.
template <class T>
T chebyshev_halley_update(const T& x, const T& f, const T& fp, const T& fpp, const T& beta) {
  if (fp == 0) throw Error(ErrorCode::ZeroDerivative, "Chebyshev-Halley update with f' = 0");
  T fp2 = fp * fp;
  T ffpp = f * fpp;
  T den = fp2 - beta * ffpp;
  if (den == 0) throw Error(ErrorCode::SingularStep, "Chebyshev-Halley denominator vanishes");
  // (1/2 - beta) f f'' written as (f f'' - 2 beta f f'') / 2 keeps beta = 1/2 exact.
  T num = fp2 + (ffpp - 2 * beta * ffpp) / 2;
  return x - num / den * (f / fp);
}

template <class T>
T newton_update(const T& x, const T& f, const T& fp) {
  if (fp == 0) throw Error(ErrorCode::ZeroDerivative, "Newton update with f' = 0");
  return x - f / fp;
}

template <class T>
T secant_update(const Sample<T>& older, const Sample<T>& newer) {
  T df = newer.f - older.f;
  if (df == 0) throw Error(ErrorCode::SingularStep, "secant slope vanishes");
  return (older.x * newer.f - newer.x * older.f) / df;
}

}  // namespace baryiter
