#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "baryiter/baryiter.hpp"

namespace testing {

using baryiter::Precision;
using baryiter::Real;
using baryiter::Sample;

template <std::integral I>
Real R(I v, long bits = 256) {
  return Real(static_cast<long>(v), Precision(bits));
}
inline Real R(const char* s, long bits = 256) { return Real::parse(s, Precision(bits)); }

/// |a - b| / max(|b|, tiny)
inline Real rel_diff(const Real& a, const Real& b) {
  Real scale = abs(b);
  if (scale.is_zero()) return abs(a);
  return abs(a - b) / scale;
}

inline bool close(const Real& a, const Real& b, const char* tol) {
  return rel_diff(a, b) <= Real::parse(tol, a.precision());
}

/// Seeded generator producing Reals with full-precision random mantissas.
class Gen {
 public:
  explicit Gen(std::uint64_t seed, long bits = 256) : rng_(seed), bits_(bits) {}

  long bits() const { return bits_; }

  Real uniform(double lo, double hi) {
    Real u(0L, Precision(bits_));
    Real scale(1L, Precision(bits_));
    for (long got = 0; got < bits_ + 32; got += 32) {
      scale = scale / 4294967296L;
      u = u + Real(static_cast<long>(rng_() & 0xffffffffULL), Precision(bits_)) * scale;
    }
    return Real(lo, Precision(bits_)) + u * Real(hi - lo, Precision(bits_));
  }

  double uniform_double(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Real nonzero(double lo, double hi) {
    Real v = uniform(lo, hi);
    return integer(0, 1) ? v : -v;
  }

  /// `count` values in [lo, hi] with pairwise gaps of at least `gap`.
  std::vector<Real> separated(std::size_t count, double lo, double hi, double gap) {
    for (;;) {
      std::vector<Real> v;
      for (std::size_t i = 0; i < count; ++i) v.push_back(uniform(lo, hi));
      bool ok = true;
      for (std::size_t i = 0; i < count && ok; ++i) {
        for (std::size_t j = i + 1; j < count && ok; ++j) ok = abs(v[i] - v[j]) > Real(gap, Precision(bits_));
      }
      if (ok) return v;
    }
  }

  template <class V>
  void shuffle(V& v) {
    std::shuffle(v.begin(), v.end(), rng_);
  }

 private:
  std::mt19937_64 rng_;
  long bits_;
};

/// Samples of f at the given abscissae, optionally with f'.
template <class F, class D>
std::vector<Sample<Real>> sample(const std::vector<Real>& xs, F f, D fp) {
  std::vector<Sample<Real>> out;
  for (const auto& x : xs) out.push_back({x, f(x), fp(x)});
  return out;
}

template <class F>
std::vector<Sample<Real>> sample(const std::vector<Real>& xs, F f) {
  std::vector<Sample<Real>> out;
  for (const auto& x : xs) out.push_back({x, f(x), std::nullopt});
  return out;
}

/// Central finite differences of a scalar map.
template <class F>
Real fd1(F p, const Real& t, const Real& h) {
  return (p(t + h) - p(t - h)) / (2 * h);
}
template <class F>
Real fd2(F p, const Real& t, const Real& h) {
  return (p(t + h) - 2 * p(t) + p(t - h)) / (h * h);
}
template <class F>
Real fd3(F p, const Real& t, const Real& h) {
  return (p(t + 2 * h) - 2 * p(t + h) + 2 * p(t - h) - p(t - 2 * h)) / (2 * h * h * h);
}

inline std::vector<Real> xs_of(const std::vector<Sample<Real>>& w) {
  std::vector<Real> out;
  for (const auto& s : w) out.push_back(s.x);
  return out;
}
inline std::vector<Real> fs_of(const std::vector<Sample<Real>>& w) {
  std::vector<Real> out;
  for (const auto& s : w) out.push_back(s.f);
  return out;
}

}  // namespace testing
