#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "support.hpp"

using namespace baryiter;
using testing::R;

namespace {

std::string fixed5(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

ErrorCode code_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ExactRootHit;
}

IterationTrace<Real> trace_of(const std::vector<const char*>& errors, const char* reference, long bits = 256) {
  IterationTrace<Real> t;
  t.precision_bits = bits;
  t.reference = R(reference, bits);
  for (std::size_t i = 0; i < errors.size(); ++i) {
    TraceStep<Real> s;
    s.index = i;
    s.error = R(errors[i], bits);
    s.x = *t.reference + *s.error;
    s.f = s.x;
    s.window_used = i == 0 ? 0 : 1;
    t.steps.push_back(s);
  }
  return t;
}

ErrorFactorSpec<Real> spec_of(ErrorScheme scheme, int cell, std::vector<Real> d) {
  return ErrorFactorSpec<Real>{scheme, cell, std::move(d)};
}

}  // namespace

TEST_CASE("root order table") {
  const std::vector<std::vector<std::string>> expected{
      {"1.00000", "1.61803", "1.83929", "1.92756", "1.96595"},
      {"2.00000", "2.73205", "2.91964", "2.97445", "2.99165"}};
  for (int m = 1; m <= 2; ++m) {
    for (int n = 0; n <= 4; ++n) {
      CHECK(fixed5(theoretical_order({OrderFamily::Root, m, n})) == expected[m - 1][n]);
    }
  }
}

TEST_CASE("optimisation order table") {
  const std::vector<std::vector<std::string>> expected{
      {"1.00000", "1.32472", "1.46557", "1.53416", "1.61803"},
      {"2.00000", "2.26953", "2.35930", "2.39246", "2.41421"},
      {"3.00000", "3.22069", "3.27902", "3.29571", "3.30278"}};
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 4; ++n) {
      CHECK(fixed5(theoretical_order({OrderFamily::Opt, m, n})) == expected[m - 1][n - 1]);
    }
    CHECK(fixed5(theoretical_order({OrderFamily::Opt, m, std::nullopt})) == expected[m - 1][4]);
  }
}

TEST_CASE("order limits") {
  CHECK(theoretical_order({OrderFamily::Root, 1, std::nullopt}) == 2);
  CHECK(theoretical_order({OrderFamily::Root, 2, std::nullopt}) == 3);
  CHECK(theoretical_order({OrderFamily::Opt, 1, std::nullopt}) == Catch::Approx((1 + std::sqrt(5.0)) / 2));
  CHECK(theoretical_order({OrderFamily::Opt, 2, std::nullopt}) == Catch::Approx(1 + std::sqrt(2.0)));
}

TEST_CASE("order solutions satisfy their equations and grow with n") {
  for (auto family : {OrderFamily::Root, OrderFamily::Opt}) {
    for (int m = 1; m <= 5; ++m) {
      double previous = 0;
      const double limit = order_limit(family, m);
      for (int n = 0; n <= 40; ++n) {
        OrderQuery q{family, m, n};
        double l = theoretical_order(q);
        CHECK(std::abs(order_residual(q, l)) <= 1e-12);
        CHECK(l >= previous - 1e-14);
        CHECK(l <= limit + 1e-12);
        previous = l;
      }
    }
  }
}

TEST_CASE("root order with n = 0 is m") {
  for (int m = 1; m <= 6; ++m) CHECK(theoretical_order({OrderFamily::Root, m, 0}) == Catch::Approx(m).epsilon(1e-12));
}

TEST_CASE("invalid order queries") {
  CHECK(code_of([] { theoretical_order({OrderFamily::Root, 0, 1}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { theoretical_order({OrderFamily::Opt, 1, -1}); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("empirical order from tabulated magnitudes") {
  CHECK(empirical_order(std::vector<double>{5.09e-11, 8.93e-18}, 1) == Catch::Approx(1.656).margin(5e-4));
  CHECK(empirical_order(std::vector<double>{2.87e-43, 1.56e-126}, 1) == Catch::Approx(2.96).margin(5e-3));
  std::vector<double> geometric;
  for (int i = 1; i <= 6; ++i) geometric.push_back(std::pow(10.0, -std::pow(2.0, i)));
  CHECK(empirical_order(geometric, 4) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(code_of([] { empirical_order(std::vector<double>{0.5}, 1); }) == ErrorCode::InsufficientData);
}

TEST_CASE("empirical order on traces") {
  auto t = trace_of({"1e-1", "1e-2", "1e-4", "1e-8", "1e-16"}, "0.7");
  CHECK(empirical_order(t, 3) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(empirical_order(t, 1) == Catch::Approx(2.0).epsilon(1e-12));

  // errors at or above 1 and below the precision floor are skipped
  t = trace_of({"3", "1e-2", "1e-6", "1e-18", "1e-80"}, "0.7");
  CHECK(empirical_order(t, 2) == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(code_of([&] { empirical_order(t, 3); }) == ErrorCode::InsufficientData);

  t.reference.reset();
  CHECK(code_of([&] { empirical_order(t, 1); }) == ErrorCode::InsufficientData);
}

TEST_CASE("predicted error factors for hand derivatives") {
  CHECK(predicted_error_factor(spec_of(ErrorScheme::ExactDFX, 2, {R(2), R(2)})) == R("0.5"));
  CHECK(predicted_error_factor(spec_of(ErrorScheme::NewtonFInterpX, 3, {R(1), R(0), R(6)})) == -1);
  CHECK(predicted_error_factor(spec_of(ErrorScheme::ExactDFX, 3, {R(3), R(0), R(0)})) == 0);
  CHECK(predicted_error_factor(spec_of(ErrorScheme::ExactDFF, 4, {R(2), R(0), R(0), R(0)})) == 0);
  // (3 f2^2 - 2 f1 f3) / (12 f1^2) with f1 = 1, f2 = 2, f3 = 3
  CHECK(predicted_error_factor(spec_of(ErrorScheme::ExactDFX, 3, {R(1), R(2), R(3)})) == R(6) / 12);
  CHECK(predicted_error_factor(spec_of(ErrorScheme::ExactDFF, 3, {R(1), R(2), R(3)})) == R(18) / 12);
  // (-1)^n phi^(n+1) / ((n+1)! phi'')
  CHECK(predicted_error_factor(spec_of(ErrorScheme::OptNewtonDF, 3, {R(0), R(2), R(6)})) == R(1) / 2);
  CHECK(predicted_error_factor(spec_of(ErrorScheme::OptNewtonDF, 4, {R(0), R(2), R(6), R(24)})) == R(-1) / 2);
}

TEST_CASE("cells without a closed form are unsupported") {
  CHECK(code_of([] { predicted_error_factor(spec_of(ErrorScheme::ExactDFX, 5, {R(1), R(1), R(1), R(1), R(1)})); }) ==
        ErrorCode::UnsupportedCell);
  CHECK(code_of([] { predicted_error_factor(spec_of(ErrorScheme::ExactD1X, 3, {R(1), R(1), R(1), R(1)})); }) ==
        ErrorCode::UnsupportedCell);
  CHECK(code_of([] { predicted_error_factor(spec_of(ErrorScheme::OptCHD1, 2, {R(1), R(1), R(1), R(1)})); }) ==
        ErrorCode::UnsupportedCell);
  CHECK(code_of([] { predicted_error_factor(spec_of(ErrorScheme::ExactDFX, 3, {R(1)})); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("scheme identifiers") {
  CHECK(error_scheme_for(RootMethod::Secant, WeightScheme::XBased) == ErrorScheme::ExactDFX);
  CHECK(error_scheme_for(RootMethod::Newton, WeightScheme::FBased) == ErrorScheme::ExactD1X);
  CHECK(!error_scheme_for(RootMethod::Picard, WeightScheme::XBased));
  CHECK(multiplicity(ErrorScheme::CHFInterp) == 2);
  CHECK(multiplicity(ErrorScheme::NewtonFInterpF) == 1);
  CHECK(is_optimisation(error_scheme_for(OptMethod::CHD1)));
}

TEST_CASE("secant error factor on x^2 - 2") {
  auto p = make_root_problem<Real>("x2", Evaluator("x^2-2"), std::nullopt, R(1, 512), sqrt(R(2, 512)));
  SolverConfig<Real> c;
  c.method = RootMethod::Secant;
  c.precision_bits = 512;
  c.bootstrap = {BootstrapKind::ExplicitSecond, R(2, 512)};
  auto t = solve(p, c);
  REQUIRE(t.status() == StepStatus::Converged);
  auto spec = spec_of(ErrorScheme::ExactDFX, 2, {2 * sqrt(R(2, 512)), R(2, 512)});
  CHECK(testing::close(predicted_error_factor(spec), 1 / (2 * sqrt(R(2, 512))), "1e-150"));
  CHECK(verify_error_factor(t, spec, 3) <= R("0.05", 512));
}

TEST_CASE("Newton error factor on x^2 - 2") {
  auto p = make_root_problem<Real>("x2", Evaluator("x^2-2"), std::nullopt, R(1, 512), sqrt(R(2, 512)));
  SolverConfig<Real> c;
  c.method = RootMethod::Newton;
  c.precision_bits = 512;
  auto t = solve(p, c);
  auto spec = spec_of(ErrorScheme::ExactD1X, 1, {2 * sqrt(R(2, 512)), R(2, 512)});
  CHECK(predicted_error_factor(spec).to_decimal(5) == "3.5355e-01");
  CHECK(verify_error_factor(t, spec, 2) <= R("0.05", 512));
}

TEST_CASE("error factor of the f[x] slope scheme on a cubic") {
  const auto& problem = find_problem("cubic_x3_minus_x_minus_2");
  auto p = root_problem<Real>(problem, 1024);
  SolverConfig<Real> c;
  c.method = RootMethod::NewtonFInterp;
  c.window = 3;
  c.precision_bits = 1024;
  auto t = solve(p, c);
  REQUIRE(t.status() == StepStatus::Converged);
  auto spec = ErrorFactorSpec<Real>{ErrorScheme::NewtonFInterpX, 3, derivatives_at_solution<Real>(problem, 4, 1024)};
  CHECK(verify_error_factor(t, spec, 3) <= R("0.1", 1024));
}

TEST_CASE("error factors need usable data") {
  auto p = make_root_problem<Real>("lin", Evaluator("7*x-3"), std::nullopt, R(0), R(3) / 7);
  SolverConfig<Real> c;
  auto t = solve(p, c);
  auto spec = spec_of(ErrorScheme::ExactDFX, 2, {R(7), R(1)});
  CHECK(code_of([&] { verify_error_factor(t, spec, 1); }) == ErrorCode::InsufficientData);
  t.reference.reset();
  CHECK(code_of([&] { verify_error_factor(t, spec, 1); }) == ErrorCode::InsufficientData);
}

TEST_CASE("observed root orders") {
  auto p = root_problem<Real>(find_problem("cos_minus_x"), 512);
  SolverConfig<Real> c;
  c.window = 4;
  c.precision_bits = 512;
  c.tol_f = R("1e-140", 512);
  c.bootstrap.kind = BootstrapKind::PicardStep;
  auto t = solve(p, c);
  CHECK(std::abs(empirical_order(t, 3) - 1.92756) <= 0.15);

  c.method = RootMethod::ExactD1;
  c.window = 3;
  t = solve(p, c);
  CHECK(std::abs(empirical_order(t, 2) - 2.91964) <= 0.15);
}
