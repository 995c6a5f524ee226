#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "baryiter/scalar.hpp"

namespace baryiter {

enum class StepStatus { Ok, SingularStepFallback, Converged, Diverged, BudgetExhausted };

constexpr std::string_view status_name(StepStatus s) {
  switch (s) {
    case StepStatus::Ok: return "ok";
    case StepStatus::SingularStepFallback: return "singular-step-fallback";
    case StepStatus::Converged: return "converged";
    case StepStatus::Diverged: return "diverged";
    case StepStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "ok";
}

inline std::optional<StepStatus> parse_status(std::string_view s) {
  for (auto st : {StepStatus::Ok, StepStatus::SingularStepFallback, StepStatus::Converged,
                  StepStatus::Diverged, StepStatus::BudgetExhausted}) {
    if (status_name(st) == s) return st;
  }
  return std::nullopt;
}

template <class T>
struct TraceStep {
  std::size_t index = 0;
  T x;
  T f;                         // f(x), or phi(x) for optimisation
  std::optional<T> f_prime;    // true derivative when the method evaluates it
  std::optional<T> error;      // signed x - reference, iff a reference is attached
  std::optional<T> curvature;  // optimisation only: interpolant phi'' estimate at x
  StepStatus status = StepStatus::Ok;
  std::size_t window_used = 0;  // samples consumed by the step that produced x (0 for x0)

  std::optional<T> abs_error() const {
    if (!error) return std::nullopt;
    return abs_value(*error);
  }
};

template <class T>
struct IterationTrace {
  std::vector<TraceStep<T>> steps;
  long precision_bits = Precision::kDefault;
  std::optional<T> reference;

  StepStatus status() const { return steps.empty() ? StepStatus::Ok : steps.back().status; }
  std::size_t iterations() const { return steps.empty() ? 0 : steps.size() - 1; }
  const T& final_x() const { return steps.back().x; }
};

}  // namespace baryiter
