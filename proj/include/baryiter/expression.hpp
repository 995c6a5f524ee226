#pragma once

// Small expression language for test functions of one variable `x`:
// numbers, + - * /, ^ with an integer exponent, parentheses and
// cos/sin/exp/log/sqrt. Supports evaluation over double or Real and
// symbolic differentiation.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "baryiter/scalar.hpp"

namespace baryiter {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, PowInt, Cos, Sin, Exp, Log, Sqrt };

class Expr {
 public:
  struct Node {
    Op op;
    std::string literal;         // Const
    std::optional<long> integer;  // Const holding an exact integer
    long exponent = 0;           // PowInt
    std::shared_ptr<const Node> a, b;
  };

  Expr() : Expr(constant(0)) {}

  static Expr constant(long v) {
    Node n{Op::Const, std::to_string(v), v, 0, nullptr, nullptr};
    return Expr(std::make_shared<const Node>(std::move(n)));
  }
  static Expr literal(std::string text) {
    std::optional<long> integer;
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos && text.size() < 18) {
      integer = std::strtol(text.c_str(), nullptr, 10);
      text = std::to_string(*integer);
    }
    Node n{Op::Const, std::move(text), integer, 0, nullptr, nullptr};
    return Expr(std::make_shared<const Node>(std::move(n)));
  }
  static Expr var() { return Expr(std::make_shared<const Node>(Node{Op::Var, "", {}, 0, nullptr, nullptr})); }

  static Expr unary(Op op, const Expr& a) {
    if (op == Op::Neg) {
      if (auto v = a.integer()) return constant(-*v);
      if (a.op() == Op::Neg) return Expr(a.node_->a);
    }
    return Expr(std::make_shared<const Node>(Node{op, "", {}, 0, a.node_, nullptr}));
  }

  static Expr binary(Op op, const Expr& a, const Expr& b) {
    auto ia = a.integer();
    auto ib = b.integer();
    switch (op) {
      case Op::Add:
        if (ia && ib) return constant(*ia + *ib);
        if (ia == 0L) return b;
        if (ib == 0L) return a;
        break;
      case Op::Sub:
        if (ia && ib) return constant(*ia - *ib);
        if (ib == 0L) return a;
        if (ia == 0L) return unary(Op::Neg, b);
        break;
      case Op::Mul:
        if (ia && ib) return constant(*ia * *ib);
        if (ia == 0L || ib == 0L) return constant(0);
        if (ia == 1L) return b;
        if (ib == 1L) return a;
        if (ia == -1L) return unary(Op::Neg, b);
        if (ib == -1L) return unary(Op::Neg, a);
        break;
      case Op::Div:
        if (ia == 0L) return constant(0);
        if (ib == 1L) return a;
        break;
      default:
        break;
    }
    return Expr(std::make_shared<const Node>(Node{op, "", {}, 0, a.node_, b.node_}));
  }

  static Expr power(const Expr& a, long n) {
    if (n == 0) return constant(1);
    if (n == 1) return a;
    if (auto v = a.integer(); v && n > 0) {
      if (*v == 0 || *v == 1) return a;
      if (*v == -1) return constant(n % 2 == 0 ? 1 : -1);
      long r = 1;
      bool fits = true;
      for (long i = 0; i < n && fits; ++i) fits = !__builtin_mul_overflow(r, *v, &r);
      if (fits) return constant(r);
    }
    return Expr(std::make_shared<const Node>(Node{Op::PowInt, "", {}, n, a.node_, nullptr}));
  }

  Op op() const { return node_->op; }
  std::optional<long> integer() const { return node_->op == Op::Const ? node_->integer : std::nullopt; }
  Expr lhs() const { return Expr(node_->a); }
  Expr rhs() const { return Expr(node_->b); }
  long exponent() const { return node_->exponent; }
  const std::string& literal_text() const { return node_->literal; }

  template <class T>
  T eval(const T& x) const {
    return eval_node(*node_, x);
  }

  Expr derivative() const;
  std::string to_string() const { return render(*node_, 0); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  template <class T>
  static T eval_node(const Node& n, const T& x) {
    using std::cos, std::sin, std::exp, std::log, std::sqrt, std::pow;
    switch (n.op) {
      case Op::Const: return n.integer ? like(x, *n.integer) : like(x, std::string_view(n.literal));
      case Op::Var: return x;
      case Op::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
      case Op::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
      case Op::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
      case Op::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
      case Op::Neg: return -eval_node(*n.a, x);
      case Op::PowInt: {
        T base = eval_node(*n.a, x);
        if constexpr (std::is_same_v<T, double>) {
          return std::pow(base, static_cast<double>(n.exponent));
        } else {
          return pow(base, n.exponent);
        }
      }
      case Op::Cos: return cos(eval_node(*n.a, x));
      case Op::Sin: return sin(eval_node(*n.a, x));
      case Op::Exp: return exp(eval_node(*n.a, x));
      case Op::Log: return log(eval_node(*n.a, x));
      case Op::Sqrt: return sqrt(eval_node(*n.a, x));
    }
    return x;
  }

  static int precedence(Op op) {
    switch (op) {
      case Op::Add:
      case Op::Sub: return 1;
      case Op::Mul:
      case Op::Div: return 2;
      case Op::Neg: return 1;
      case Op::PowInt: return 4;
      default: return 5;
    }
  }

  static std::string render(const Node& n, int outer) {
    std::string s;
    auto fn = [&](const char* name) { return std::string(name) + "(" + render(*n.a, 0) + ")"; };
    switch (n.op) {
      case Op::Const: s = n.literal; break;
      case Op::Var: s = "x"; break;
      case Op::Add: s = render(*n.a, 1) + "+" + render(*n.b, 2); break;
      case Op::Sub: s = render(*n.a, 1) + "-" + render(*n.b, 2); break;
      case Op::Mul: s = render(*n.a, 2) + "*" + render(*n.b, 3); break;
      case Op::Div: s = render(*n.a, 2) + "/" + render(*n.b, 3); break;
      case Op::Neg: s = "-" + render(*n.a, 3); break;
      case Op::PowInt:
        s = render(*n.a, 5) + "^" + (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent));
        break;
      case Op::Cos: return fn("cos");
      case Op::Sin: return fn("sin");
      case Op::Exp: return fn("exp");
      case Op::Log: return fn("log");
      case Op::Sqrt: return fn("sqrt");
    }
    int p = precedence(n.op);
    if (n.op == Op::Const && !s.empty() && s[0] == '-') p = 1;
    return p < outer ? "(" + s + ")" : s;
  }

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
inline Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }

inline Expr Expr::derivative() const {
  const Expr a = node_->a ? lhs() : Expr();
  const Expr b = node_->b ? rhs() : Expr();
  switch (op()) {
    case Op::Const: return constant(0);
    case Op::Var: return constant(1);
    case Op::Add: return a.derivative() + b.derivative();
    case Op::Sub: return a.derivative() - b.derivative();
    case Op::Mul: return a.derivative() * b + a * b.derivative();
    case Op::Div: return (a.derivative() * b - a * b.derivative()) / power(b, 2);
    case Op::Neg: return -a.derivative();
    case Op::PowInt: return constant(exponent()) * power(a, exponent() - 1) * a.derivative();
    case Op::Cos: return -(unary(Op::Sin, a) * a.derivative());
    case Op::Sin: return unary(Op::Cos, a) * a.derivative();
    case Op::Exp: return *this * a.derivative();
    case Op::Log: return a.derivative() / a;
    case Op::Sqrt: return a.derivative() / (constant(2) * *this);
  }
  return constant(0);
}

namespace detail {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_ + 1, message); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+')) {
        e = e + parse_product();
      } else if (accept('-')) {
        e = e - parse_product();
      } else {
        return e;
      }
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        e = e / parse_unary();
      } else {
        return e;
      }
    }
  }

  // Unary minus binds looser than ^, so -x^2 is -(x^2).
  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    Expr exponent = parse_unary();
    auto n = exponent.integer();
    if (!n) {
      pos_ = at;
      fail("exponent must be an integer constant");
    }
    return Expr::power(base, *n);
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "x") return Expr::var();
      Op op;
      if (name == "cos") op = Op::Cos;
      else if (name == "sin") op = Op::Sin;
      else if (name == "exp") op = Op::Exp;
      else if (name == "log") op = Op::Log;
      else if (name == "sqrt") op = Op::Sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      expect('(');
      Expr arg = parse_sum();
      expect(')');
      return Expr::unary(op, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark;
        fail("malformed exponent");
      }
    }
    return Expr::literal(std::string(src_.substr(start, pos_ - start)));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expression(std::string_view src) { return detail::ExpressionParser(src).parse(); }

/// Expression plus lazily built derivatives. Copies share the cache.
class Evaluator {
 public:
  explicit Evaluator(Expr e) : state_(std::make_shared<State>()) { state_->derivs.push_back(std::move(e)); }
  explicit Evaluator(std::string_view src) : Evaluator(parse_expression(src)) {}

  const Expr& expression() const { return state_->derivs.front(); }

  /// k-th derivative expression (k = 0 is the function itself).
  Expr derivative(std::size_t k) const {
    std::lock_guard lock(state_->mutex);
    while (state_->derivs.size() <= k) state_->derivs.push_back(state_->derivs.back().derivative());
    return state_->derivs[k];
  }

  template <class T>
  T operator()(const T& x, std::size_t k = 0) const {
    return derivative(k).eval(x);
  }

 private:
  struct State {
    std::mutex mutex;
    std::vector<Expr> derivs;
  };
  std::shared_ptr<State> state_;
};

}  // namespace baryiter
