#pragma once

// Evaluation of the barycentric interpolants behind the iteration schemes.
// These are diagnostics: the solvers never call them, but every derivative
// estimate the solvers use is a closed form of one of these evaluators.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "baryiter/weights.hpp"

namespace baryiter {

/// One evaluated point. For optimisation problems f holds phi.
template <class T>
struct Sample {
  T x;
  T f;
  std::optional<T> f_prime;
};

enum class Orientation {
  Direct,   // f[x]: nodes are x_i, values f_i
  Inverse,  // x[f]: nodes are f_i, values x_i
};

template <class T>
struct InterpolantSpec {
  std::vector<Sample<T>> samples;
  std::variant<WeightSet<T>, HermiteWeightSet<T>> weights;
  Orientation orientation = Orientation::Direct;
};

namespace detail {

template <class T>
const T& node_of(const Sample<T>& s, Orientation o) {
  return o == Orientation::Direct ? s.x : s.f;
}

template <class T>
const T& value_of(const Sample<T>& s, Orientation o) {
  return o == Orientation::Direct ? s.f : s.x;
}

template <class T>
T slope_of(const Sample<T>& s, Orientation o) {
  if (!s.f_prime) throw Error(ErrorCode::InvalidConfig, "Hermite evaluation needs f' at every sample");
  if (o == Orientation::Direct) return *s.f_prime;
  if (*s.f_prime == 0) throw Error(ErrorCode::ZeroDerivative, "inverse slope 1/f' is undefined");
  return 1 / *s.f_prime;
}

// Index of the node that t sits on (within the separation threshold), if any.
template <class T>
std::optional<std::size_t> node_hit(const std::vector<Sample<T>>& samples, Orientation o, const T& t) {
  std::vector<T> nodes;
  nodes.reserve(samples.size() + 1);
  for (const auto& s : samples) nodes.push_back(node_of(s, o));
  nodes.push_back(t);
  const T tol = separation_threshold<T>(nodes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (nearly_equal(t, nodes[i], tol)) return i;
  }
  return std::nullopt;
}

}  // namespace detail

/// Plain barycentric ratio  sum w_i y_i/(t - v_i) / sum w_i/(t - v_i).
template <class T>
T eval_plain(const InterpolantSpec<T>& spec, const T& t) {
  const auto* w = std::get_if<WeightSet<T>>(&spec.weights);
  if (w == nullptr) throw Error(ErrorCode::InvalidConfig, "eval_plain needs a plain weight set");
  if (w->omega.size() != spec.samples.size() || spec.samples.empty()) {
    throw Error(ErrorCode::InvalidConfig, "weight count does not match sample count");
  }
  const Orientation o = spec.orientation;
  if (auto hit = detail::node_hit(spec.samples, o, t)) {
    return detail::value_of(spec.samples[*hit], o);
  }
  T num = like(t, 0);
  T den = like(t, 0);
  for (std::size_t i = 0; i < spec.samples.size(); ++i) {
    T term = w->omega[i] / (t - detail::node_of(spec.samples[i], o));
    num += term * detail::value_of(spec.samples[i], o);
    den += term;
  }
  if (den == 0) throw Error(ErrorCode::SingularDenominator, "barycentric denominator vanishes");
  return num / den;
}

/// Order-2 (Hermite) barycentric ratio
///   sum [l_i y_i + (g_i y_i + l_i y'_i)(t - v_i)]/(t - v_i)^2
///   / sum [l_i + g_i (t - v_i)]/(t - v_i)^2
/// with y' = f' for the direct orientation and 1/f' for the inverse one.
template <class T>
T eval_hermite(const InterpolantSpec<T>& spec, const T& t) {
  const auto* w = std::get_if<HermiteWeightSet<T>>(&spec.weights);
  if (w == nullptr) throw Error(ErrorCode::InvalidConfig, "eval_hermite needs a Hermite weight set");
  if (w->lambda.size() != spec.samples.size() || w->gamma.size() != spec.samples.size() ||
      spec.samples.empty()) {
    throw Error(ErrorCode::InvalidConfig, "weight count does not match sample count");
  }
  const Orientation o = spec.orientation;
  if (auto hit = detail::node_hit(spec.samples, o, t)) {
    return detail::value_of(spec.samples[*hit], o);
  }
  T num = like(t, 0);
  T den = like(t, 0);
  for (std::size_t i = 0; i < spec.samples.size(); ++i) {
    const auto& s = spec.samples[i];
    const T& y = detail::value_of(s, o);
    T d = t - detail::node_of(s, o);
    T d2 = d * d;
    num += (w->lambda[i] * y + (w->gamma[i] * y + w->lambda[i] * detail::slope_of(s, o)) * d) / d2;
    den += (w->lambda[i] + w->gamma[i] * d) / d2;
  }
  if (den == 0) throw Error(ErrorCode::SingularDenominator, "barycentric denominator vanishes");
  return num / den;
}

}  // namespace baryiter
