#pragma once

// Univariate optimisation by local steps on the direct objective interpolant.
// Only direct interpolation phi[x] is used; the inverse of an objective is
// multi-valued around an extremum.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "baryiter/root_search.hpp"

namespace baryiter {

/// (x, phi, phi'): a Sample with f in the role of phi.
template <class T>
using ObjectiveSample = Sample<T>;

enum class OptMethod {
  NewtonDF,  // Newton step with phi', phi'' from the derivative-free interpolant
  CHD1,      // Chebyshev-Halley step with phi'', phi''' from the Hermite interpolant
};

constexpr std::string_view method_name(OptMethod m) {
  return m == OptMethod::NewtonDF ? "newton-df" : "ch-d1";
}

inline std::optional<OptMethod> parse_opt_method(std::string_view s) {
  if (s == "newton-df") return OptMethod::NewtonDF;
  if (s == "ch-d1") return OptMethod::CHD1;
  return std::nullopt;
}

constexpr std::size_t min_samples(OptMethod m) { return m == OptMethod::NewtonDF ? 3 : 2; }

/// phi'_n ~ sum_{k!=n} w_k (phi_n - phi_k)/(x_n - x_k) / sum_{k!=n} w_k
template <class T>
T phi_slope_df(std::span<const ObjectiveSample<T>> window, const WeightSet<T>& weights) {
  return direct_slope_estimate(window, weights);
}

/// phi''_n ~ -2 sum_{k!=n} w_k [(phi_n - phi_k) - phi'_n (x_n - x_k)]/(x_n - x_k)^2 / sum_{k!=n} w_k
template <class T>
T phi_curvature_df(std::span<const ObjectiveSample<T>> window, const WeightSet<T>& weights,
                   const T& phi_prime_n) {
  detail::require_size(window, 2, "phi_curvature_df");
  detail::require_weight_count<T>(weights.omega.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  T num = like(s_n.x, 0);
  T den = like(s_n.x, 0);
  for (std::size_t k = 0; k < n; ++k) {
    detail::require_distinct(s_n.x, window[k].x, "x");
    T dx = s_n.x - window[k].x;
    num += weights.omega[k] * ((s_n.f - window[k].f) - phi_prime_n * dx) / (dx * dx);
    den += weights.omega[k];
  }
  if (den == 0) throw Error(ErrorCode::SingularStep, "sum of w_k (k != n) vanishes");
  return -2 * num / den;
}

/// x_{n+1} = x_n - phi'_n / phi''_n with both derivatives from the interpolant.
template <class T>
T opt_step_df(std::span<const ObjectiveSample<T>> window, const WeightSet<T>& weights) {
  T slope = phi_slope_df(window, weights);
  T curvature = phi_curvature_df(window, weights, slope);
  if (curvature == 0) throw Error(ErrorCode::SingularStep, "interpolant curvature vanishes");
  return window.back().x - slope / curvature;
}

/// phi'' at the newest sample of the Hermite interpolant (x-based
/// squared-product weights).
template <class T>
T phi_curvature_d1(std::span<const ObjectiveSample<T>> window, const HermiteWeightSet<T>& hweights) {
  detail::require_size(window, 1, "phi_curvature_d1");
  detail::require_weight_count<T>(hweights.lambda.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  if (!s_n.f_prime) throw Error(ErrorCode::InvalidConfig, "newest sample carries no phi'");
  if (hweights.lambda[n] == 0) throw Error(ErrorCode::SingularStep, "lambda_n vanishes");
  T acc = hweights.gamma[n] * *s_n.f_prime;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s_k = window[k];
    if (!s_k.f_prime) throw Error(ErrorCode::InvalidConfig, "sample carries no phi'");
    detail::require_distinct(s_n.x, s_k.x, "x");
    T dx = s_n.x - s_k.x;
    T dphi = s_n.f - s_k.f;
    acc += (hweights.gamma[k] * dphi - hweights.lambda[k] * *s_k.f_prime) / dx +
           hweights.lambda[k] * dphi / (dx * dx);
  }
  return -2 * acc / hweights.lambda[n];
}

/// phi''' at the newest sample of the Hermite interpolant, given phi'' there.
template <class T>
T phi_third_d1(std::span<const ObjectiveSample<T>> window, const HermiteWeightSet<T>& hweights,
               const T& phi_second_n) {
  detail::require_size(window, 1, "phi_third_d1");
  detail::require_weight_count<T>(hweights.lambda.size(), window.size());
  const std::size_t n = window.size() - 1;
  const auto& s_n = window[n];
  if (!s_n.f_prime) throw Error(ErrorCode::InvalidConfig, "newest sample carries no phi'");
  if (hweights.lambda[n] == 0) throw Error(ErrorCode::SingularStep, "lambda_n vanishes");
  const T& dphi_n = *s_n.f_prime;
  T acc = hweights.gamma[n] * phi_second_n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s_k = window[k];
    if (!s_k.f_prime) throw Error(ErrorCode::InvalidConfig, "sample carries no phi'");
    detail::require_distinct(s_n.x, s_k.x, "x");
    T dx = s_n.x - s_k.x;
    T dx2 = dx * dx;
    T dphi = s_n.f - s_k.f;
    acc += hweights.gamma[k] * dphi_n / dx -
           (hweights.gamma[k] * dphi - hweights.lambda[k] * (dphi_n + *s_k.f_prime)) / dx2 -
           2 * hweights.lambda[k] * dphi / (dx2 * dx);
  }
  return -6 * acc / hweights.lambda[n];
}

/// Chebyshev-Halley step applied to (phi', phi'', phi''').
template <class T>
T opt_step_d1(std::span<const ObjectiveSample<T>> window, const HermiteWeightSet<T>& hweights,
              const T& beta) {
  const auto& s_n = window.back();
  T second = phi_curvature_d1(window, hweights);
  if (second == 0) throw Error(ErrorCode::SingularStep, "interpolant curvature vanishes");
  T third = phi_third_d1(window, hweights, second);
  return chebyshev_halley_update(s_n.x, *s_n.f_prime, second, third, adopt(beta, s_n.x));
}

template <class T>
struct OptConfig {
  OptMethod method = OptMethod::NewtonDF;
  std::size_t window = 3;
  std::optional<T> beta;   // CHD1 only; 1 when unset
  std::optional<T> tol_g;  // on |phi'| (CHD1) or |phi' estimate| (NewtonDF)
  std::optional<T> tol_x;
  std::size_t max_iter = 100;
  long precision_bits = Precision::kDefault;
  Bootstrap<T> bootstrap;  // Auto means Perturb; PicardStep is rejected
};

template <class T>
struct OptProblem {
  using Fn = std::function<T(const T&)>;

  std::string name;
  Fn phi;
  Fn phi_prime;  // required by CHD1
  T x0;
  std::optional<T> reference;  // stationary point
};

namespace detail {

template <class T>
std::vector<ObjectiveSample<T>> newest_distinct_x(const std::deque<ObjectiveSample<T>>& memory,
                                                  std::size_t count) {
  return select_window(memory, count, Distinctness{true, false});
}

}  // namespace detail

/// Runs an optimisation iteration. Convergence is |residual| < tol_g or
/// |dx| < tol_x, where the residual is the true phi' for CHD1 and the
/// interpolant slope estimate for NewtonDF. The trace records the
/// interpolant curvature estimate at each sample once it is available; its
/// sign tells minimum from maximum.
template <class T>
IterationTrace<T> optimize(const OptProblem<T>& problem, const OptConfig<T>& config) {
  const std::size_t needed = min_samples(config.method);
  if (!problem.phi) throw Error(ErrorCode::InvalidConfig, "problem has no phi");
  if (config.method == OptMethod::CHD1 && !problem.phi_prime) {
    throw Error(ErrorCode::InvalidConfig, "ch-d1 needs phi'");
  }
  if (config.window < needed) {
    throw Error(ErrorCode::InvalidConfig, std::string(method_name(config.method)) + " needs window >= " +
                                              std::to_string(needed));
  }
  if (config.bootstrap.kind == BootstrapKind::PicardStep) {
    throw Error(ErrorCode::InvalidConfig, "picard bootstrap does not apply to optimisation");
  }
  const T x0 = at_precision(problem.x0, config.precision_bits);
  const T tol_g = config.tol_g ? adopt(*config.tol_g, x0) : default_tolerance(x0);
  const T tol_x = config.tol_x ? adopt(*config.tol_x, x0) : default_tolerance(x0);
  for (const T* tol : {&tol_g, &tol_x}) {
    if (!(like(x0, 0) < *tol)) throw Error(ErrorCode::InvalidConfig, "tolerances must be positive");
  }
  const T beta = config.beta ? adopt(*config.beta, x0) : like(x0, 1);
  const bool d1 = config.method == OptMethod::CHD1;

  IterationTrace<T> trace;
  trace.precision_bits = precision_bits(x0);
  if (problem.reference) trace.reference = adopt(*problem.reference, x0);
  std::deque<ObjectiveSample<T>> memory;

  auto record = [&](const T& x, std::size_t window_used, StepStatus status) {
    TraceStep<T> step;
    step.index = trace.steps.size();
    step.x = x;
    step.window_used = window_used;
    bool finite = is_finite(x);
    try {
      step.f = finite ? problem.phi(x) : x;
      if (d1 && finite) step.f_prime = problem.phi_prime(x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError) throw;
      finite = false;
      step.f = like(x, 0) / 0;
    }
    finite = finite && is_finite(step.f) && (!step.f_prime || is_finite(*step.f_prime));
    if (trace.reference) step.error = x - *trace.reference;

    std::optional<T> residual;
    if (finite) {
      memory.push_back(ObjectiveSample<T>{x, step.f, step.f_prime});
      while (memory.size() > config.window) memory.pop_front();
      auto window = detail::newest_distinct_x(memory, config.window);
      std::span<const ObjectiveSample<T>> view(window);
      try {
        if (d1) {
          residual = step.f_prime;
          if (window.size() >= 2) step.curvature = phi_curvature_d1(view, hermite_f(NodeSet<T>(x_values(view))));
        } else if (window.size() >= 2) {
          auto w = omega_product(NodeSet<T>(x_values(view)));
          T slope = phi_slope_df(view, w);
          residual = slope;
          if (window.size() >= 3) step.curvature = phi_curvature_df(view, w, slope);
        }
      } catch (const Error&) {
        // Diagnostics only; a degenerate window shows up again in the next step.
      }
    }

    if (!finite) {
      status = StepStatus::Diverged;
    } else if ((residual && abs_value(*residual) < tol_g) ||
               (!trace.steps.empty() && abs_value(x - trace.steps.back().x) < tol_x)) {
      status = StepStatus::Converged;
    } else if (step.index >= config.max_iter) {
      status = StepStatus::BudgetExhausted;
    }
    step.status = status;
    trace.steps.push_back(std::move(step));
    return status != StepStatus::Ok && status != StepStatus::SingularStepFallback;
  };

  if (record(x0, 0, StepStatus::Ok)) return trace;

  bool explicit_used = false;
  while (memory.size() < needed) {
    const T& newest = memory.back().x;
    T next = newest;
    if (config.bootstrap.kind == BootstrapKind::ExplicitSecond && !explicit_used) {
      if (!config.bootstrap.value) throw Error(ErrorCode::InvalidConfig, "explicit bootstrap needs x1");
      next = adopt(*config.bootstrap.value, x0);
      explicit_used = true;
    } else {
      T h = (config.bootstrap.value && config.bootstrap.kind == BootstrapKind::Perturb)
                ? adopt(*config.bootstrap.value, x0)
                : std::max(like(x0, 1), abs_value(x0)) / 1000;
      next = newest + h;
    }
    if (record(next, memory.size(), StepStatus::Ok)) return trace;
  }

  for (;;) {
    std::size_t width = std::min(config.window, memory.size());
    bool fell_back = false;
    std::optional<T> next;
    std::size_t used = 0;
    while (!next) {
      auto window = detail::newest_distinct_x(memory, width);
      if (window.size() < needed) {
        throw Error(ErrorCode::DegenerateNodes, "window collapsed below " + std::to_string(needed) +
                                                    " distinct samples");
      }
      std::span<const ObjectiveSample<T>> view(window);
      try {
        next = d1 ? opt_step_d1(view, hermite_f(NodeSet<T>(x_values(view))), beta)
                  : opt_step_df(view, omega_product(NodeSet<T>(x_values(view))));
        used = window.size();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularStep || width <= needed) throw;
        --width;
        fell_back = true;
      }
    }
    if (record(*next, used, fell_back ? StepStatus::SingularStepFallback : StepStatus::Ok)) return trace;
  }
}

}  // namespace baryiter
