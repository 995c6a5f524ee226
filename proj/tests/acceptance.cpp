#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"

using namespace baryiter;
using testing::R;

namespace {

using Cells = std::vector<std::string>;

struct Column {
  const char* label;
  RootMethod method;
  std::size_t window;
  Cells cells;
};

const std::vector<Column> kTable4{
    {"picard", RootMethod::Picard, 1,
     {"2.26e+00", "1.73e+00", "1.90e-01", "1.14e-01", "8.15e-02", "5.24e-02", "3.63e-02", "2.40e-02", "1.63e-02",
      "1.09e-02"}},
    {"n=1", RootMethod::ExactDF, 2,
     {"2.26e+00", "1.73e+00", "6.19e-01", "8.35e-01", "1.01e-01", "1.23e-02", "2.91e-04", "7.94e-07", "5.09e-11",
      "8.93e-18"}},
    {"n=2", RootMethod::ExactDF, 3,
     {"2.26e+00", "1.73e+00", "6.19e-01", "3.47e-01", "6.61e-02", "1.73e-03", "4.27e-06", "5.60e-11", "4.80e-20",
      "1.33e-36"}},
    {"n=3", RootMethod::ExactDF, 4,
     {"2.26e+00", "1.73e+00", "6.19e-01", "3.47e-01", "1.77e-02", "2.00e-04", "1.78e-08", "4.40e-16", "6.06e-31",
      "2.08e-59"}},
    {"newton", RootMethod::Newton, 1,
     {"2.26e+00", "1.24e+00", "1.39e+00", "4.94e-02", "5.68e-04", "7.12e-08", "1.12e-15", "2.76e-31", "1.68e-62",
      "6.25e-125"}},
};

const std::vector<Column> kTable6{
    {"n=0", RootMethod::ExactD1, 1,
     {"2.26e+00", "1.24e+00", "1.39e+00", "4.94e-02", "5.68e-04", "7.12e-08", "1.12e-15"}},
    {"n=1", RootMethod::ExactD1, 2,
     {"2.26e+00", "1.24e+00", "1.18e-01", "6.85e-04", "1.35e-10", "1.88e-28", "1.41e-77"}},
    {"n=2", RootMethod::ExactD1, 3,
     {"2.26e+00", "1.24e+00", "1.18e-01", "2.44e-05", "9.33e-15", "2.87e-43", "1.56e-126"}},
    {"n=3", RootMethod::ExactD1, 4,
     {"2.26e+00", "1.24e+00", "1.18e-01", "2.44e-05", "4.76e-15", "6.73e-44", "7.76e-131"}},
    {"halley", RootMethod::Halley, 1,
     {"2.26e+00", "8.72e-01", "5.27e-02", "1.65e-05", "5.19e-16", "1.62e-47", "4.93e-142"}},
};

const std::vector<std::vector<const char*>> kRootOrders{
    {"1.00000", "1.61803", "1.83929", "1.92756", "1.96595"},
    {"2.00000", "2.73205", "2.91964", "2.97445", "2.99165"}};

const std::vector<std::vector<const char*>> kOptOrders{
    {"1.00000", "1.32472", "1.46557", "1.53416", "1.61803"},
    {"2.00000", "2.26953", "2.35930", "2.39246", "2.41421"},
    {"3.00000", "3.22069", "3.27902", "3.29571", "3.30278"}};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string sci(const Real& v) { return v.to_decimal(3); }

std::string fixed(double v, int places) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome reproduce(const std::vector<Column>& table, std::size_t rows) {
  auto start = std::chrono::steady_clock::now();
  auto problem = root_problem<Real>(find_problem("cos_minus_x"), 512);
  int matched = 0, total = 0;
  std::string first_miss;
  for (const auto& col : table) {
    SolverConfig<Real> c;
    c.method = col.method;
    c.window = col.window;
    c.precision_bits = 512;
    c.max_iter = rows - 1;
    c.tol_f = Real::pow2(-2048, Precision(512));
    c.tol_x = c.tol_f;
    c.bootstrap.kind = BootstrapKind::PicardStep;
    auto t = solve(problem, c);
    for (std::size_t i = 0; i < col.cells.size(); ++i) {
      ++total;
      std::string got = i < t.steps.size() ? sci(*t.steps[i].abs_error()) : "missing";
      if (got == col.cells[i]) {
        ++matched;
      } else if (first_miss.empty()) {
        first_miss = std::string(col.label) + " i=" + std::to_string(i) + " got " + got + " want " + col.cells[i];
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::string detail = std::to_string(matched) + "/" + std::to_string(total) + " cells, " + fixed(elapsed, 2) + " s";
  if (!first_miss.empty()) detail += ", first miss " + first_miss;
  return {matched == total && elapsed <= 10, detail};
}

Outcome criterion1() { return reproduce(kTable4, 10); }

Outcome criterion2() { return reproduce(kTable6, 7); }

Outcome criterion3() {
  auto start = std::chrono::steady_clock::now();
  int matched = 0, total = 0;
  for (int m = 1; m <= 2; ++m) {
    for (int n = 0; n <= 4; ++n) {
      ++total;
      matched += fixed(theoretical_order({OrderFamily::Root, m, n}), 5) == kRootOrders[m - 1][n];
    }
  }
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 5; ++n) {
      std::optional<int> nn = n == 5 ? std::nullopt : std::optional<int>(n);
      ++total;
      matched += fixed(theoretical_order({OrderFamily::Opt, m, nn}), 5) == kOptOrders[m - 1][n - 1];
    }
  }
  const double elapsed = seconds_since(start);
  return {matched == total && total == 25 && elapsed <= 1,
          std::to_string(matched) + "/" + std::to_string(total) + " values, " + fixed(elapsed, 3) + " s"};
}

Outcome within(std::vector<std::pair<const char*, Real>> devs, const char* tol) {
  const Real limit = R(tol);
  bool ok = true;
  std::string detail;
  for (const auto& [name, d] : devs) {
    ok = ok && d <= limit;
    if (!detail.empty()) detail += ", ";
    detail += std::string(name) + " " + sci(d);
  }
  return {ok, detail + " (limit " + tol + ")"};
}

Outcome criterion4() {
  return within({{"secant", testing::secant_reduction(401, 100)}, {"newton", testing::newton_reduction(402, 100)}},
                "1e-20");
}

Outcome criterion5() {
  return within({{"scale", testing::scale_invariance(501, 100)},
                 {"affine", testing::affine_equivariance(502, 100)},
                 {"permutation", testing::permutation_invariance(503, 100)},
                 {"objective", testing::objective_affine_invariance(504, 100)}},
                "1e-20");
}

Outcome criterion6() {
  auto r = testing::gradient_checks(601, 50);
  return within({{"slope x", r.direct_slope},
                 {"slope f", r.inverse_slope},
                 {"curv x[f]", r.second_x_interp},
                 {"curv f[x]", r.second_f_interp},
                 {"phi' df", r.phi_slope_df},
                 {"phi'' df", r.phi_curvature_df},
                 {"phi'' d1", r.phi_curvature_d1},
                 {"phi''' d1", r.phi_third_d1}},
                "1e-8");
}

Outcome criterion7() {
  Real secant_dev, cubic_dev, formula_dev;
  {
    auto p = make_root_problem<Real>("x^2-2", Evaluator("x^2-2"), std::nullopt, R(1, 512), sqrt(R(2, 512)));
    SolverConfig<Real> c;
    c.method = RootMethod::Secant;
    c.precision_bits = 512;
    c.bootstrap = {BootstrapKind::ExplicitSecond, R(2, 512)};
    auto t = solve(p, c);
    ErrorFactorSpec<Real> spec{ErrorScheme::ExactDFX, 2, {2 * sqrt(R(2, 512)), R(2, 512)}};
    secant_dev = verify_error_factor(t, spec, 3);
  }
  {
    const auto& problem = find_problem("cubic_x3_minus_x_minus_2");
    auto p = root_problem<Real>(problem, 1024);
    SolverConfig<Real> c;
    c.method = RootMethod::NewtonFInterp;
    c.window = 3;
    c.precision_bits = 1024;
    auto t = solve(p, c);
    auto d = derivatives_at_solution<Real>(problem, 4, 1024);
    ErrorFactorSpec<Real> spec{ErrorScheme::NewtonFInterpX, 3, d};
    formula_dev = testing::rel_diff(predicted_error_factor(spec), -d[2] / (6 * d[0]));
    cubic_dev = verify_error_factor(t, spec, 3);
  }
  const bool ok = secant_dev <= R("0.05") && cubic_dev <= R("0.1") && formula_dev <= R("1e-70");
  return {ok, "secant " + sci(secant_dev) + " (limit 5e-02), f[x] window 3 on cubic " + sci(cubic_dev) +
                  " (limit 1e-01)"};
}

Outcome criterion8() {
  double root_order, opt_order;
  {
    auto p = root_problem<Real>(find_problem("cos_minus_x"), 512);
    SolverConfig<Real> c;
    c.method = RootMethod::ExactDF;
    c.window = 4;
    c.precision_bits = 512;
    c.tol_f = R("1e-140", 512);
    c.bootstrap.kind = BootstrapKind::PicardStep;
    root_order = empirical_order(solve(p, c), 3);
  }
  {
    auto p = opt_problem<Real>(find_problem("opt_xexp"), 512);
    OptConfig<Real> c;
    c.method = OptMethod::CHD1;
    c.window = 3;
    c.precision_bits = 512;
    c.tol_g = R("1e-140", 512);
    opt_order = empirical_order(optimize(p, c), 4);
  }
  const bool ok = std::abs(root_order - 1.92756) <= 0.15 && std::abs(opt_order - 2.35930) <= 0.15;
  return {ok, "ExactDF window 4 " + fixed(root_order, 5) + " vs 1.92756, CHD1 window 3 " + fixed(opt_order, 5) +
                  " vs 2.35930"};
}

// Index of the first step that consumed at least `need` samples; bootstrap steps use fewer.
std::size_t first_step_with(const IterationTrace<Real>& t, std::size_t need) {
  std::size_t i = 1;
  while (i < t.steps.size() && t.steps[i].window_used < need) ++i;
  return i;
}

Outcome criterion9() {
  int passed = 0, total = 0;
  std::string first_fail;
  auto note = [&](bool ok, const std::string& what) {
    ++total;
    passed += ok;
    if (!ok && first_fail.empty()) first_fail = what;
  };

  auto linear = make_root_problem<Real>("7*x-3", Evaluator("7*x-3"), std::nullopt, R(0), R(3) / 7);
  const std::vector<std::pair<RootMethod, std::vector<std::size_t>>> root_runs{
      {RootMethod::ExactDF, {2, 3, 5}},  {RootMethod::ExactD1, {1, 2, 3}}, {RootMethod::Secant, {2}},
      {RootMethod::Newton, {1}},         {RootMethod::NewtonFInterp, {2, 3}}};
  for (const auto& [method, windows] : root_runs) {
    for (std::size_t window : windows) {
      for (auto scheme : {WeightScheme::XBased, WeightScheme::FBased}) {
        SolverConfig<Real> c;
        c.method = method;
        c.window = window;
        c.weight_scheme = scheme;
        auto t = solve(linear, c);
        const std::size_t need = method == RootMethod::ExactD1 || method == RootMethod::Newton ? 1 : 2;
        const std::size_t first = first_step_with(t, need);
        const bool ok = t.status() == StepStatus::Converged && t.steps.size() == first + 1 &&
                        abs(t.steps.back().f) < default_tolerance(t.final_x());
        std::ostringstream what;
        what << "linear " << method_name(method) << " window " << window;
        note(ok, what.str());
      }
    }
  }

  auto quadratic = make_opt_problem<Real>("2*(x-0.7)^2+3", Evaluator("2*(x-0.7)^2+3"), R(0), R("0.7"));
  for (auto [method, windows] : {std::pair{OptMethod::NewtonDF, std::vector<std::size_t>{3, 4, 5}},
                                 std::pair{OptMethod::CHD1, std::vector<std::size_t>{2, 3, 4}}}) {
    for (std::size_t window : windows) {
      OptConfig<Real> c;
      c.method = method;
      c.window = window;
      auto t = optimize(quadratic, c);
      const std::size_t need = method == OptMethod::NewtonDF ? 3 : 2;
      const std::size_t first = first_step_with(t, need);
      const bool ok = t.status() == StepStatus::Converged && first + 1 == t.steps.size() &&
                      abs(quadratic.phi_prime(t.final_x())) < default_tolerance(t.final_x()) &&
                      abs(t.final_x() - R("0.7")) < R("1e-60");
      std::ostringstream what;
      what << "quadratic " << method_name(method) << " window " << window;
      note(ok, what.str());
    }
  }
  std::string detail = std::to_string(passed) + "/" + std::to_string(total) + " runs exact in one step";
  if (!first_fail.empty()) detail += ", first failure " + first_fail;
  return {passed == total, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"derivative-free error table", criterion1},
      {"Hermite error table", criterion2},
      {"theoretical orders", criterion3},
      {"reduction to secant and Newton", criterion4},
      {"invariance suite", criterion5},
      {"derivative estimates vs finite differences", criterion6},
      {"leading error factors", criterion7},
      {"empirical orders", criterion8},
      {"linear and quadratic exactness", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
