#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace baryiter;
using testing::R;

namespace {

std::size_t column_of(const char* src) {
  try {
    parse_expression(src);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

// Random expression over the full grammar with a nonzero, well-defined value near x in [0.5, 2].
std::string random_expression(testing::Gen& g, int depth) {
  if (depth == 0 || g.integer(0, 3) == 0) {
    switch (g.integer(0, 3)) {
      case 0: return "x";
      case 1: return std::to_string(g.integer(1, 9));
      case 2: return std::to_string(g.integer(1, 9)) + "." + std::to_string(g.integer(0, 99));
      default: return "x";
    }
  }
  auto sub = [&] { return random_expression(g, depth - 1); };
  switch (g.integer(0, 9)) {
    case 0: return sub() + "+" + sub();
    case 1: return sub() + "-" + sub();
    case 2: return "(" + sub() + ")*(" + sub() + ")";
    case 3: return "(" + sub() + ")/(2+x^2)";
    case 4: return "(" + sub() + ")^" + std::to_string(g.integer(2, 4));
    case 5: return "cos(" + sub() + ")";
    case 6: return "sin(" + sub() + ")";
    case 7: return "exp(" + sub() + "/9)";
    case 8: return "log(3+x)";
    default: return "-" + sub();
  }
}

}  // namespace

TEST_CASE("evaluation of simple expressions") {
  Evaluator f("cos(x)-x");
  CHECK(f(R(3)) == cos(R(3)) - 3);
  CHECK(f(3.0) == Catch::Approx(std::cos(3.0) - 3));

  Evaluator q("x^2-2");
  CHECK(q(R(3), 1) == 6);
  CHECK(q(R(3), 2) == 2);
  CHECK(q(R(3), 3) == 0);
}

TEST_CASE("operator precedence and associativity") {
  CHECK(parse_expression("2^3^2").eval(R(0)) == 512);
  CHECK(parse_expression("-x^2").eval(R(3)) == -9);
  CHECK(parse_expression("8/4/2").eval(R(0)) == 1);
  CHECK(parse_expression("2-3-4").eval(R(0)) == -5);
  CHECK(parse_expression("1+2*3").eval(R(0)) == 7);
  CHECK(parse_expression("(1+2)*3").eval(R(0)) == 9);
  CHECK(parse_expression("x^-2").eval(R(2)) == R("0.25"));
  CHECK(parse_expression(" 2 * x ").eval(R(4)) == 8);
  CHECK(parse_expression("1.5e2").eval(R(0)) == 150);
}

TEST_CASE("elementary functions") {
  CHECK(parse_expression("exp(log(x))").eval(R(5)) == exp(log(R(5))));
  CHECK(parse_expression("sqrt(x)").eval(R(9)) == 3);
  CHECK(parse_expression("sin(x)^2+cos(x)^2").eval(R("0.3")) == pow(sin(R("0.3")), 2) + pow(cos(R("0.3")), 2));
  CHECK_THROWS_AS(parse_expression("log(x)").eval(R(-1)), Error);
}

TEST_CASE("parse errors report a column") {
  CHECK(column_of("log(x") == 6);
  CHECK(column_of("") == 1);
  CHECK(column_of("x+") == 3);
  CHECK(column_of("2*y") == 3);
  CHECK(column_of("tan(x)") == 1);
  CHECK(column_of("x^1.5") == 3);
  CHECK(column_of("x)") == 2);
  CHECK(column_of("cos x") == 5);
  try {
    parse_expression("log(x");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("symbolic derivatives") {
  Evaluator f("x*exp(x)");
  CHECK(testing::close(f(R("-0.5"), 1), R("0.5") * exp(R("-0.5")), "1e-70"));
  CHECK(testing::close(f(R(2), 3), R(5) * exp(R(2)), "1e-70"));
  Evaluator g("sqrt(x)");
  CHECK(testing::close(g(R(4), 1), R("0.25"), "1e-70"));
  Evaluator h("1/x");
  CHECK(testing::close(h(R(2), 2), R("0.25"), "1e-70"));
  CHECK(parse_expression("x^3").derivative().to_string() == "3*x^2");
  CHECK(parse_expression("7").derivative().to_string() == "0");
}

TEST_CASE("property: rendering round trips") {
  testing::Gen gen(91);
  for (int c = 0; c < 200; ++c) {
    const std::string src = random_expression(gen, 4);
    Expr e = parse_expression(src);
    const std::string text = e.to_string();
    Expr back = parse_expression(text);
    INFO(src << "  ->  " << text);
    CHECK(back.to_string() == text);
    Real x = gen.uniform(0.5, 2);
    CHECK(testing::close(back.eval(x), e.eval(x), "1e-60"));
  }
}

TEST_CASE("property: derivatives match finite differences") {
  testing::Gen gen(92);
  for (int c = 0; c < 100; ++c) {
    const std::string src = random_expression(gen, 3);
    Evaluator f(src);
    Real x = gen.uniform(0.5, 2);
    Real h = R("1e-25");
    INFO(src);
    for (std::size_t k = 1; k <= 3; ++k) {
      Real fd = testing::fd1([&](const Real& t) { return f(t, k - 1); }, x, h);
      Real exact = f(x, k);
      CHECK(abs(fd - exact) <= R("1e-20") * (1 + abs(exact)));
    }
  }
}
