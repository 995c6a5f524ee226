#pragma once

// Barycentric weight families.
//
// Weights are never normalized. The iteration formulas are ratios, so common
// factors cancel, and the raw products keep the Vandermonde-kernel identities
// exactly checkable.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "baryiter/scalar.hpp"

namespace baryiter {

/// Two node values closer than this (relative to the largest magnitude in the
/// set) are treated as coincident: 2^-(bits-8) * max|v|.
template <class T>
T separation_threshold(std::span<const T> values) {
  T biggest = like(values.front(), 0);
  for (const T& v : values) {
    T a = abs_value(v);
    if (biggest < a) biggest = a;
  }
  return pow2_like(values.front(), -(precision_bits(values.front()) - 8)) * biggest;
}

template <class T>
bool nearly_equal(const T& a, const T& b, const T& threshold) {
  return !(threshold < abs_value(a - b));
}

/// Ordered node coordinates (all x_i or all f_i of a window), pairwise distinct.
template <class T>
class NodeSet {
 public:
  explicit NodeSet(std::vector<T> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::DegenerateNodes, "empty node set");
    const T tol = separation_threshold<T>(values_);
    for (std::size_t i = 0; i < values_.size(); ++i) {
      for (std::size_t j = i + 1; j < values_.size(); ++j) {
        if (nearly_equal(values_[i], values_[j], tol)) {
          throw Error(ErrorCode::DegenerateNodes,
                      "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
        }
      }
    }
  }

  std::span<const T> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const T& operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<T> values_;
};

template <class T>
struct WeightSet {
  std::vector<T> omega;
};

template <class T>
struct HermiteWeightSet {
  std::vector<T> lambda;
  std::vector<T> gamma;
};

/// omega_i = prod_{j != i} 1 / (v_i - v_j)
template <class T>
WeightSet<T> omega_product(const NodeSet<T>& nodes) {
  const std::size_t n = nodes.size();
  WeightSet<T> w;
  w.omega.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    T prod = like(nodes[i], 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) prod *= nodes[i] - nodes[j];
    }
    w.omega.push_back(1 / prod);
  }
  return w;
}

/// Alpha-shifted weights over f-nodes: the newest node f_n enters the other
/// weights as alpha * f_n. alpha == 1 reproduces omega_product bit for bit.
template <class T>
WeightSet<T> omega_alpha(const NodeSet<T>& f_nodes, const T& alpha) {
  const std::size_t count = f_nodes.size();
  const std::size_t n = count - 1;
  const T shifted = adopt(alpha, f_nodes[n]) * f_nodes[n];
  const T tol = separation_threshold(f_nodes.values());
  WeightSet<T> w;
  w.omega.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const T& pivot = i == n ? shifted : f_nodes[i];
    T prod = like(pivot, 1);
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const T& other = (j == n) ? shifted : f_nodes[j];
      T factor = pivot - other;
      if (nearly_equal(factor, like(factor, 0), tol)) {
        throw Error(ErrorCode::DegenerateNodes,
                    "alpha-shifted factor vanishes for nodes " + std::to_string(i) + ", " +
                        std::to_string(j));
      }
      prod *= factor;
    }
    w.omega.push_back(1 / prod);
  }
  return w;
}

/// Hermite weights for the inverse interpolant on x-nodes:
///   lambda_i = f'_i prod_{j != i} (x_i - x_j)^-2
///   gamma_i  = -(2 lambda_i / f'_i) sum_{j != i} 1 / (x_i - x_j)
template <class T>
HermiteWeightSet<T> hermite_x(const NodeSet<T>& x_nodes, std::span<const T> f_primes) {
  const std::size_t n = x_nodes.size();
  if (f_primes.size() != n) {
    throw Error(ErrorCode::InvalidConfig, "derivative count does not match node count");
  }
  HermiteWeightSet<T> w;
  w.lambda.reserve(n);
  w.gamma.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (f_primes[i] == 0) {
      throw Error(ErrorCode::ZeroDerivative, "f' vanishes at node " + std::to_string(i));
    }
    T prod = like(x_nodes[i], 1);
    T sum = like(x_nodes[i], 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      T d = x_nodes[i] - x_nodes[j];
      prod *= d * d;
      sum += 1 / d;
    }
    T lambda = f_primes[i] / prod;
    w.gamma.push_back(-2 * (lambda / f_primes[i]) * sum);
    w.lambda.push_back(std::move(lambda));
  }
  return w;
}

/// Squared-product Hermite weights on any coordinate:
///   lambda_i = prod_{j != i} (v_i - v_j)^-2
///   gamma_i  = -2 lambda_i sum_{j != i} 1 / (v_i - v_j)
/// On f-nodes these give the polynomial inverse interpolant; on x-nodes the
/// polynomial Hermite interpolant used by the f[x] and optimisation schemes.
template <class T>
HermiteWeightSet<T> hermite_f(const NodeSet<T>& nodes) {
  const std::size_t n = nodes.size();
  HermiteWeightSet<T> w;
  w.lambda.reserve(n);
  w.gamma.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    T prod = like(nodes[i], 1);
    T sum = like(nodes[i], 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      T d = nodes[i] - nodes[j];
      prod *= d * d;
      sum += 1 / d;
    }
    T lambda = 1 / prod;
    w.gamma.push_back(-2 * lambda * sum);
    w.lambda.push_back(std::move(lambda));
  }
  return w;
}

}  // namespace baryiter
