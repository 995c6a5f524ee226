#pragma once

// Built-in test problems and their high-precision reference solutions.

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "baryiter/expression.hpp"
#include "baryiter/optimise.hpp"

namespace baryiter {

enum class ProblemKind { Root, Optimisation };

struct Problem {
  std::string name;
  ProblemKind kind = ProblemKind::Root;
  std::string expression;                 // f for roots, phi for optimisation
  std::optional<std::string> fixed_point;  // g with x = g(x)
  std::string default_x0;
  std::string notes;

  Evaluator evaluator() const { return Evaluator(expression); }
};

inline const std::vector<Problem>& list_problems() {
  static const std::vector<Problem> problems = {
      {"cos_minus_x", ProblemKind::Root, "cos(x)-x", "cos(x)", "3", "Dottie number; Picard form x = cos x"},
      {"x2_minus_2", ProblemKind::Root, "x^2-2", std::nullopt, "1", "root sqrt(2)"},
      {"exp_root", ProblemKind::Root, "exp(x)-2*x-1", std::nullopt, "1.5",
       "simple root near 1.2564; the other root is 0"},
      {"cubic_x3_minus_x_minus_2", ProblemKind::Root, "x^3-x-2", std::nullopt, "2", "single real root near 1.5214"},
      {"opt_quadratic", ProblemKind::Optimisation, "(x-2)^2+1", std::nullopt, "0", "minimiser 2"},
      {"opt_xexp", ProblemKind::Optimisation, "x*exp(x)", std::nullopt, "0", "minimiser -1"},
      {"opt_cos", ProblemKind::Optimisation, "cos(x)", std::nullopt, "2.5", "minimiser pi"},
      {"opt_quartic", ProblemKind::Optimisation, "x^4-2*x^2", std::nullopt, "0.8",
       "minimisers +-1; x0 selects the positive basin"},
  };
  return problems;
}

inline const Problem& find_problem(std::string_view name) {
  for (const auto& p : list_problems()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::UnknownProblem, "no built-in problem named '" + std::string(name) + "'");
}

constexpr long kReferenceDigits = 320;

/// Newton refinement at 1024 bits on f (roots) or phi' (optimisation) until
/// the residual drops below 1e-300.
inline Real refine_solution(const Evaluator& ev, ProblemKind kind, const Real& start) {
  const Precision p(Precision::kReference);
  const std::size_t order = kind == ProblemKind::Root ? 0 : 1;
  const Real threshold = Real::parse("1e-300", p);
  Real x = start.with_precision(p);
  for (int i = 0; i < 200; ++i) {
    Real r = ev(x, order);
    if (!r.is_finite()) break;
    if (abs(r) < threshold) return x;
    Real d = ev(x, order + 1);
    if (d.is_zero()) break;
    x = x - r / d;
  }
  throw Error(ErrorCode::NonConvergence, "reference refinement did not reach |residual| < 1e-300");
}

inline Real reference_root(const Problem& problem) {
  return refine_solution(problem.evaluator(), problem.kind,
                         Real::parse(problem.default_x0, Precision(Precision::kReference)));
}

/// Lazily computed reference solutions, optionally backed by a text sidecar of
/// `name<TAB>decimal` lines.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::filesystem::path sidecar) : sidecar_(std::move(sidecar)) { load(); }

  static Corpus& shared() {
    static Corpus instance;
    return instance;
  }

  Real reference(const std::string& name) {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    Real r = reference_root(find_problem(name));
    cache_.emplace(name, r);
    if (sidecar_) save();
    return r;
  }

  void save() const {
    std::ofstream out(*sidecar_);
    for (const auto& [name, value] : cache_) out << name << '\t' << value.to_decimal(kReferenceDigits) << '\n';
  }

 private:
  void load() {
    std::ifstream in(*sidecar_);
    std::string line;
    while (std::getline(in, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      std::string name = line.substr(0, tab);
      try {
        find_problem(name);
        cache_.emplace(name, Real::parse(line.substr(tab + 1), Precision(Precision::kReference)));
      } catch (const Error&) {
        // stale or malformed records are recomputed on demand
      }
    }
  }

  std::optional<std::filesystem::path> sidecar_;
  std::mutex mutex_;
  std::map<std::string, Real> cache_;
};

namespace detail {

template <class T>
T from_real(const Real& v, long bits) {
  if constexpr (std::is_same_v<T, double>) {
    return v.to_double();
  } else {
    return at_precision(v, bits);
  }
}

template <class T>
T parse_at(const std::string& decimal, long bits) {
  if constexpr (std::is_same_v<T, double>) {
    return like(0.0, std::string_view(decimal));
  } else {
    return Real::parse(decimal, checked_precision(bits));
  }
}

}  // namespace detail

/// Builds a solver problem from an expression. `reference` may be empty.
template <class T>
RootProblem<T> make_root_problem(const std::string& name, const Evaluator& f, const std::optional<Evaluator>& g,
                                 const T& x0, std::optional<T> reference) {
  RootProblem<T> out;
  out.name = name;
  out.f = [f](const T& x) { return f(x, 0); };
  out.f_prime = [f](const T& x) { return f(x, 1); };
  out.f_second = [f](const T& x) { return f(x, 2); };
  if (g) out.fixed_point = [g = *g](const T& x) { return g(x, 0); };
  out.x0 = x0;
  out.reference = std::move(reference);
  return out;
}

template <class T>
OptProblem<T> make_opt_problem(const std::string& name, const Evaluator& phi, const T& x0,
                               std::optional<T> reference) {
  OptProblem<T> out;
  out.name = name;
  out.phi = [phi](const T& x) { return phi(x, 0); };
  out.phi_prime = [phi](const T& x) { return phi(x, 1); };
  out.x0 = x0;
  out.reference = std::move(reference);
  return out;
}

template <class T>
RootProblem<T> root_problem(const Problem& p, long bits, Corpus& corpus = Corpus::shared()) {
  if (p.kind != ProblemKind::Root) throw Error(ErrorCode::InvalidConfig, p.name + " is an optimisation problem");
  std::optional<Evaluator> g;
  if (p.fixed_point) g.emplace(*p.fixed_point);
  return make_root_problem<T>(p.name, p.evaluator(), g, detail::parse_at<T>(p.default_x0, bits),
                              detail::from_real<T>(corpus.reference(p.name), bits));
}

template <class T>
OptProblem<T> opt_problem(const Problem& p, long bits, Corpus& corpus = Corpus::shared()) {
  if (p.kind != ProblemKind::Optimisation) throw Error(ErrorCode::InvalidConfig, p.name + " is a root problem");
  return make_opt_problem<T>(p.name, p.evaluator(), detail::parse_at<T>(p.default_x0, bits),
                             detail::from_real<T>(corpus.reference(p.name), bits));
}

/// Derivatives 1..k of the problem's function at its reference solution.
template <class T>
std::vector<T> derivatives_at_solution(const Problem& p, std::size_t k, long bits, Corpus& corpus = Corpus::shared()) {
  const Evaluator ev = p.evaluator();
  const Real ref = corpus.reference(p.name);
  std::vector<T> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(detail::from_real<T>(ev(ref, i), bits));
  return out;
}

}  // namespace baryiter
