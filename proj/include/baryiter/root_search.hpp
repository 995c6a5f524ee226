#pragma once

// Memory-managed driver for the univariate root iterations.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "baryiter/root_steps.hpp"
#include "baryiter/trace.hpp"

namespace baryiter {

enum class RootMethod {
  ExactDF,        // exact root of the derivative-free inverse interpolant
  ExactD1,        // exact root of the Hermite inverse interpolant
  NewtonXInterp,  // Newton step with 1/f' from the x[f] interpolant
  NewtonFInterp,  // Newton step with f' from the f[x] interpolant
  CHXInterp,      // Chebyshev-Halley step with f'' from the Hermite x[f] interpolant
  CHFInterp,      // Chebyshev-Halley step with f'' from the Hermite f[x] interpolant
  Picard,
  Newton,
  Halley,
  Secant,
};

inline constexpr std::array kRootMethods = {
    RootMethod::ExactDF, RootMethod::ExactD1, RootMethod::NewtonXInterp, RootMethod::NewtonFInterp,
    RootMethod::CHXInterp, RootMethod::CHFInterp, RootMethod::Picard, RootMethod::Newton,
    RootMethod::Halley, RootMethod::Secant};

constexpr std::string_view method_name(RootMethod m) {
  switch (m) {
    case RootMethod::ExactDF: return "exact-df";
    case RootMethod::ExactD1: return "exact-d1";
    case RootMethod::NewtonXInterp: return "newton-x-interp";
    case RootMethod::NewtonFInterp: return "newton-f-interp";
    case RootMethod::CHXInterp: return "ch-x-interp";
    case RootMethod::CHFInterp: return "ch-f-interp";
    case RootMethod::Picard: return "picard";
    case RootMethod::Newton: return "newton";
    case RootMethod::Halley: return "halley";
    case RootMethod::Secant: return "secant";
  }
  return "";
}

inline std::optional<RootMethod> parse_root_method(std::string_view s) {
  for (auto m : kRootMethods) {
    if (method_name(m) == s) return m;
  }
  return std::nullopt;
}

constexpr bool needs_derivative(RootMethod m) {
  return m == RootMethod::ExactD1 || m == RootMethod::CHXInterp || m == RootMethod::CHFInterp ||
         m == RootMethod::Newton || m == RootMethod::Halley;
}

constexpr bool is_baseline(RootMethod m) {
  return m == RootMethod::Picard || m == RootMethod::Newton || m == RootMethod::Halley ||
         m == RootMethod::Secant;
}

/// Fewest samples a step of this method can consume.
constexpr std::size_t min_samples(RootMethod m) {
  switch (m) {
    case RootMethod::ExactDF:
    case RootMethod::NewtonXInterp:
    case RootMethod::NewtonFInterp:
    case RootMethod::Secant:
      return 2;
    default:
      return 1;
  }
}

enum class WeightScheme { XBased, FBased, AlphaShifted };

constexpr std::string_view weight_scheme_name(WeightScheme w) {
  switch (w) {
    case WeightScheme::XBased: return "x";
    case WeightScheme::FBased: return "f";
    case WeightScheme::AlphaShifted: return "alpha";
  }
  return "";
}

enum class BootstrapKind {
  Auto,            // PicardStep when a fixed-point form exists, Perturb otherwise
  ExplicitSecond,  // caller supplies x1
  PicardStep,      // x1 = g(x0)
  Perturb,         // x1 = x0 + h, h = 1e-3 * max(1, |x0|) unless given
};

constexpr std::string_view bootstrap_name(BootstrapKind b) {
  switch (b) {
    case BootstrapKind::Auto: return "auto";
    case BootstrapKind::ExplicitSecond: return "explicit";
    case BootstrapKind::PicardStep: return "picard";
    case BootstrapKind::Perturb: return "perturb";
  }
  return "";
}

template <class T>
struct Bootstrap {
  BootstrapKind kind = BootstrapKind::Auto;
  std::optional<T> value;  // x1 for ExplicitSecond, h for Perturb
};

template <class T>
struct SolverConfig {
  RootMethod method = RootMethod::ExactDF;
  WeightScheme weight_scheme = WeightScheme::XBased;
  std::optional<T> alpha;  // AlphaShifted only; 0 when unset
  std::size_t window = 2;  // memory size n + 1
  std::optional<T> beta;   // Chebyshev-Halley parameter; 1 when unset
  std::optional<T> tol_f;  // default_tolerance() when unset
  std::optional<T> tol_x;
  std::size_t max_iter = 100;
  long precision_bits = Precision::kDefault;
  Bootstrap<T> bootstrap;
};

template <class T>
struct RootProblem {
  using Fn = std::function<T(const T&)>;

  std::string name;
  Fn f;
  Fn f_prime;      // optional
  Fn f_second;     // optional, Halley only
  Fn fixed_point;  // optional g with x = g(x)
  T x0;
  std::optional<T> reference;
};

namespace detail {

template <class T>
void validate(const RootProblem<T>& problem, const SolverConfig<T>& config) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!problem.f) fail("problem has no f");
  if (needs_derivative(config.method) && !problem.f_prime) {
    fail(std::string(method_name(config.method)) + " needs f'");
  }
  if (config.method == RootMethod::Halley && !problem.f_second) fail("halley needs f''");
  if (config.method == RootMethod::Picard && !problem.fixed_point) fail("picard needs a fixed-point form");
  if (!is_baseline(config.method) && config.window < min_samples(config.method)) {
    fail(std::string(method_name(config.method)) + " needs window >= " +
         std::to_string(min_samples(config.method)));
  }
  if (config.method == RootMethod::ExactD1 && config.weight_scheme == WeightScheme::AlphaShifted) {
    fail("alpha-shifted weights are defined for derivative-free schemes only");
  }
  for (const auto* tol : {&config.tol_f, &config.tol_x}) {
    if (*tol && !(like(**tol, 0) < **tol)) fail("tolerances must be positive");
  }
  if (config.beta && !is_finite(*config.beta)) fail("beta must be finite");
}

// Which coordinates must be pairwise distinct for a method's weights and
// finite differences.
struct Distinctness {
  bool x = false;
  bool f = false;
};

inline Distinctness distinctness(RootMethod m, WeightScheme w) {
  Distinctness d;
  const bool f_weights = w != WeightScheme::XBased;
  switch (m) {
    case RootMethod::ExactDF: (f_weights ? d.f : d.x) = true; break;
    case RootMethod::ExactD1: (f_weights ? d.f : d.x) = true; break;
    case RootMethod::NewtonXInterp: d.f = true; (f_weights ? d.f : d.x) = true; break;
    case RootMethod::NewtonFInterp: d.x = true; (f_weights ? d.f : d.x) = true; break;
    case RootMethod::CHXInterp: d.f = true; break;
    case RootMethod::CHFInterp: d.x = true; break;
    case RootMethod::Secant: d.x = true; d.f = true; break;
    default: break;
  }
  return d;
}

// Newest `count` samples, with any older sample that collides with a newer
// one (in a coordinate that must be distinct) evicted.
template <class T>
std::vector<Sample<T>> select_window(const std::deque<Sample<T>>& memory, std::size_t count,
                                     Distinctness need) {
  count = std::min(count, memory.size());
  std::vector<Sample<T>> candidates(memory.end() - static_cast<std::ptrdiff_t>(count), memory.end());
  if (!need.x && !need.f) return candidates;
  std::vector<T> xs, fs;
  for (const auto& s : candidates) {
    xs.push_back(s.x);
    fs.push_back(s.f);
  }
  const T x_tol = separation_threshold<T>(xs);
  const T f_tol = separation_threshold<T>(fs);
  std::vector<Sample<T>> kept;  // newest first
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    bool collides = std::any_of(kept.begin(), kept.end(), [&](const Sample<T>& k) {
      return (need.x && nearly_equal(k.x, it->x, x_tol)) || (need.f && nearly_equal(k.f, it->f, f_tol));
    });
    if (!collides) kept.push_back(*it);
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

template <class T>
WeightSet<T> plain_weights(std::span<const Sample<T>> window, WeightScheme scheme, const T& alpha) {
  switch (scheme) {
    case WeightScheme::XBased: return omega_product(NodeSet<T>(x_values(window)));
    case WeightScheme::FBased: return omega_product(NodeSet<T>(f_values(window)));
    case WeightScheme::AlphaShifted: return omega_alpha(NodeSet<T>(f_values(window)), alpha);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown weight scheme");
}

}  // namespace detail

/// Classical one-point and two-point updates on the newest samples.
template <class T>
T baseline_step(RootMethod method, std::span<const Sample<T>> window, const RootProblem<T>& problem) {
  if (window.empty()) throw Error(ErrorCode::InvalidConfig, "empty window");
  const auto& s = window.back();
  switch (method) {
    case RootMethod::Picard:
      if (!problem.fixed_point) throw Error(ErrorCode::InvalidConfig, "picard needs a fixed-point form");
      return problem.fixed_point(s.x);
    case RootMethod::Newton:
      return newton_update(s.x, s.f, detail::derivative_at(s, window.size() - 1));
    case RootMethod::Halley: {
      if (!problem.f_second) throw Error(ErrorCode::InvalidConfig, "halley needs f''");
      const T& fp = detail::derivative_at(s, window.size() - 1);
      return chebyshev_halley_update(s.x, s.f, fp, problem.f_second(s.x), like(s.x, 1) / 2);
    }
    case RootMethod::Secant:
      if (window.size() < 2) throw Error(ErrorCode::InvalidConfig, "secant needs two samples");
      return secant_update(window[window.size() - 2], s);
    default:
      throw Error(ErrorCode::InvalidConfig, std::string(method_name(method)) + " is not a baseline");
  }
}

/// One step of any root method over an already-selected window.
template <class T>
T method_step(std::span<const Sample<T>> window, const SolverConfig<T>& config,
              const RootProblem<T>& problem) {
  if (is_baseline(config.method)) return baseline_step(config.method, window, problem);
  const auto& s_n = window.back();
  const T beta = config.beta ? adopt(*config.beta, s_n.x) : like(s_n.x, 1);
  const T alpha = config.alpha ? adopt(*config.alpha, s_n.x) : like(s_n.x, 0);
  switch (config.method) {
    case RootMethod::ExactDF:
      return step_exact_df(window, detail::plain_weights(window, config.weight_scheme, alpha));
    case RootMethod::ExactD1: {
      detail::require_nonzero_residuals(window);
      auto hw = config.weight_scheme == WeightScheme::XBased
                    ? hermite_x(NodeSet<T>(x_values(window)), std::span<const T>(f_prime_values(window)))
                    : hermite_f(NodeSet<T>(f_values(window)));
      return step_exact_d1(window, hw);
    }
    case RootMethod::NewtonXInterp: {
      T inv = inverse_slope_estimate(window, detail::plain_weights(window, config.weight_scheme, alpha));
      return s_n.x - s_n.f * inv;
    }
    case RootMethod::NewtonFInterp: {
      T slope = direct_slope_estimate(window, detail::plain_weights(window, config.weight_scheme, alpha));
      if (slope == 0) throw Error(ErrorCode::SingularStep, "interpolant slope vanishes");
      return s_n.x - s_n.f / slope;
    }
    case RootMethod::CHXInterp: {
      T fpp = second_derivative_x_interp(window, hermite_f(NodeSet<T>(f_values(window))));
      return chebyshev_halley_update(s_n.x, s_n.f, *s_n.f_prime, fpp, beta);
    }
    case RootMethod::CHFInterp: {
      T fpp = second_derivative_f_interp(window, hermite_f(NodeSet<T>(x_values(window))));
      return chebyshev_halley_update(s_n.x, s_n.f, *s_n.f_prime, fpp, beta);
    }
    default:
      break;
  }
  throw Error(ErrorCode::InvalidConfig, "unhandled method");
}

/// Runs a root iteration until |f| < tol_f, |dx| < tol_x, a non-finite
/// iterate, or max_iter steps past x0. Memory holds at most `window` newest
/// samples and grows from the initial points until it is full. A step that
/// hits SingularStep is retried with one sample fewer.
template <class T>
IterationTrace<T> solve(const RootProblem<T>& problem, const SolverConfig<T>& config) {
  detail::validate(problem, config);
  const T x0 = at_precision(problem.x0, config.precision_bits);
  const T tol_f = config.tol_f ? adopt(*config.tol_f, x0) : default_tolerance(x0);
  const T tol_x = config.tol_x ? adopt(*config.tol_x, x0) : default_tolerance(x0);
  const bool wants_fp = needs_derivative(config.method);
  const RootMethod method = config.method;

  std::size_t capacity = is_baseline(method) ? 2 : config.window;
  const std::size_t needed = min_samples(method);
  capacity = std::max(capacity, needed);

  IterationTrace<T> trace;
  trace.precision_bits = precision_bits(x0);
  if (problem.reference) trace.reference = adopt(*problem.reference, x0);

  std::deque<Sample<T>> memory;

  // Evaluates x, appends it to trace and memory, and reports whether the run ends.
  auto record = [&](const T& x, std::size_t window_used, StepStatus status) {
    TraceStep<T> step;
    step.index = trace.steps.size();
    step.x = x;
    step.window_used = window_used;
    bool finite = is_finite(x);
    try {
      step.f = finite ? problem.f(x) : x;
      if (wants_fp && finite) step.f_prime = problem.f_prime(x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError) throw;
      finite = false;
      step.f = like(x, 0) / 0;
    }
    finite = finite && is_finite(step.f) && (!step.f_prime || is_finite(*step.f_prime));
    if (trace.reference) step.error = x - *trace.reference;

    if (!finite) {
      status = StepStatus::Diverged;
    } else if (abs_value(step.f) < tol_f ||
               (!trace.steps.empty() && abs_value(x - trace.steps.back().x) < tol_x)) {
      status = StepStatus::Converged;
    } else if (step.index >= config.max_iter) {
      status = StepStatus::BudgetExhausted;
    }
    step.status = status;
    memory.push_back(Sample<T>{x, step.f, step.f_prime});
    while (memory.size() > capacity) memory.pop_front();
    trace.steps.push_back(std::move(step));
    return status == StepStatus::Converged || status == StepStatus::Diverged ||
           status == StepStatus::BudgetExhausted;
  };

  if (record(x0, 0, StepStatus::Ok)) return trace;

  // Bootstrap until the method has enough samples for its first step.
  BootstrapKind kind = config.bootstrap.kind;
  if (kind == BootstrapKind::Auto) {
    kind = problem.fixed_point ? BootstrapKind::PicardStep : BootstrapKind::Perturb;
  }
  bool explicit_used = false;
  while (memory.size() < needed) {
    const T& newest = memory.back().x;
    T next = newest;
    if (kind == BootstrapKind::ExplicitSecond && !explicit_used) {
      if (!config.bootstrap.value) throw Error(ErrorCode::InvalidConfig, "explicit bootstrap needs x1");
      next = adopt(*config.bootstrap.value, x0);
      explicit_used = true;
    } else if (kind == BootstrapKind::PicardStep) {
      if (!problem.fixed_point) throw Error(ErrorCode::InvalidConfig, "picard bootstrap needs a fixed-point form");
      next = problem.fixed_point(newest);
    } else {
      T h = (config.bootstrap.value && kind == BootstrapKind::Perturb)
                ? adopt(*config.bootstrap.value, x0)
                : std::max(like(x0, 1), abs_value(x0)) / 1000;
      next = newest + h;
    }
    if (record(next, memory.size(), StepStatus::Ok)) return trace;
  }

  const detail::Distinctness need = detail::distinctness(method, config.weight_scheme);
  for (;;) {
    std::size_t width = is_baseline(method) ? min_samples(method) : std::min(config.window, memory.size());
    bool fell_back = false;
    std::optional<T> next;
    std::size_t used = 0;
    while (!next) {
      std::vector<Sample<T>> window = detail::select_window(memory, width, need);
      if (window.size() < needed) {
        throw Error(ErrorCode::DegenerateNodes, "window collapsed below " + std::to_string(needed) +
                                                    " distinct samples");
      }
      try {
        next = method_step(std::span<const Sample<T>>(window), config, problem);
        used = window.size();
      } catch (const ExactRootHit&) {
        trace.steps.back().status = StepStatus::Converged;
        return trace;
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
