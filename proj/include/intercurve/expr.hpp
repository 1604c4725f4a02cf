#pragma once

// Recursive-descent parser and evaluator for the configuration expression
// language:
//
//   expr    :=  term  (('+' | '-') term)*
//   term    :=  unary (('*' | '/') unary)*
//   unary   :=  '-' unary | power
//   power   :=  primary ('^' unary)?          (right associative)
//   primary :=  NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan exp log sqrt sinh cosh tanh. Constants: pi, e.
// Numbers: decimal and scientific literals. '^' with a non-integer exponent
// requires a positive base at evaluation time; constant integer exponents work
// for any base. Evaluation produces either a plain value or a second-order jet.

#include "intercurve/jet.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace intercurve {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  size_t position;
};

struct EvalError : std::runtime_error {
  EvalError(const std::string& msg, std::string subexpression)
      : std::runtime_error(msg + " in '" + subexpression + "'"),
        subexpr(std::move(subexpression)) {}
  std::string subexpr;
};

namespace ast {

enum class Kind { number, constant, variable, unary_minus, add, sub, mul, div, pow, call };
enum class Fn { sin, cos, tan, exp, log, sqrt, sinh, cosh, tanh };

struct Node {
  Kind kind;
  double number = 0.0;     // number
  std::string name;        // constant ("pi"/"e") or original variable spelling
  int var_index = -1;      // variable
  Fn fn = Fn::sin;         // call
  std::unique_ptr<Node> a, b;
  size_t begin = 0, end = 0;  // source span, for evaluation diagnostics
};

using NodePtr = std::unique_ptr<Node>;

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::tan: return "tan";
    case Fn::exp: return "exp";
    case Fn::log: return "log";
    case Fn::sqrt: return "sqrt";
    case Fn::sinh: return "sinh";
    case Fn::cosh: return "cosh";
    case Fn::tanh: return "tanh";
  }
  return "?";
}

inline bool equal(const Node& x, const Node& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::number: return x.number == y.number;
    case Kind::constant: return x.name == y.name;
    case Kind::variable: return x.var_index == y.var_index;
    case Kind::unary_minus: return equal(*x.a, *y.a);
    case Kind::call: return x.fn == y.fn && equal(*x.a, *y.a);
    default: return equal(*x.a, *y.a) && equal(*x.b, *y.b);
  }
}

inline NodePtr clone(const Node& n) {
  auto c = std::make_unique<Node>();
  c->kind = n.kind;
  c->number = n.number;
  c->name = n.name;
  c->var_index = n.var_index;
  c->fn = n.fn;
  c->begin = n.begin;
  c->end = n.end;
  if (n.a) c->a = clone(*n.a);
  if (n.b) c->b = clone(*n.b);
  return c;
}

}  // namespace ast

class Expression;

namespace detail {

class Parser {
 public:
  Parser(std::string source, std::vector<std::string> variables)
      : src_(std::move(source)), vars_(std::move(variables)) {}

  ast::NodePtr parse() {
    skip_ws();
    ast::NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return root;
  }

 private:
  ast::NodePtr parse_expr() {
    const size_t begin = pos_;
    ast::NodePtr left = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        const char op = take();
        ast::NodePtr right = parse_term();
        left = make_binary(op == '+' ? ast::Kind::add : ast::Kind::sub, std::move(left),
                           std::move(right), begin);
      } else {
        return left;
      }
    }
  }

  ast::NodePtr parse_term() {
    const size_t begin = pos_;
    ast::NodePtr left = parse_unary();
    for (;;) {
      skip_ws();
      if (peek() == '*' || peek() == '/') {
        const char op = take();
        ast::NodePtr right = parse_unary();
        left = make_binary(op == '*' ? ast::Kind::mul : ast::Kind::div, std::move(left),
                           std::move(right), begin);
      } else {
        return left;
      }
    }
  }

  ast::NodePtr parse_unary() {
    skip_ws();
    if (peek() == '-') {
      const size_t begin = pos_;
      take();
      ast::NodePtr inner = parse_unary();
      auto node = std::make_unique<ast::Node>();
      node->kind = ast::Kind::unary_minus;
      node->a = std::move(inner);
      node->begin = begin;
      node->end = node->a->end;
      return node;
    }
    return parse_power();
  }

  ast::NodePtr parse_power() {
    const size_t begin = pos_;
    ast::NodePtr base = parse_primary();
    skip_ws();
    if (peek() == '^') {
      take();
      ast::NodePtr exponent = parse_unary();  // right associative, binds tighter than unary '-'
      return make_binary(ast::Kind::pow, std::move(base), std::move(exponent), begin);
    }
    return base;
  }

  ast::NodePtr parse_primary() {
    skip_ws();
    const size_t begin = pos_;
    const char c = peek();
    if (c == '(') {
      take();
      ast::NodePtr inner = parse_expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      take();
      inner->begin = begin;
      inner->end = pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ast::NodePtr parse_number() {
    const size_t begin = pos_;
    const char* start = src_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw ParseError("malformed number", pos_);
    pos_ += static_cast<size_t>(end - start);
    auto node = std::make_unique<ast::Node>();
    node->kind = ast::Kind::number;
    node->number = v;
    node->begin = begin;
    node->end = pos_;
    return node;
  }

  ast::NodePtr parse_identifier() {
    const size_t begin = pos_;
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') name += take();
    skip_ws();
    if (peek() == '(') {
      take();
      ast::NodePtr arg = parse_expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')' after call argument", pos_);
      take();
      auto node = std::make_unique<ast::Node>();
      node->kind = ast::Kind::call;
      node->fn = lookup_fn(name, begin);
      node->a = std::move(arg);
      node->begin = begin;
      node->end = pos_;
      return node;
    }
    auto node = std::make_unique<ast::Node>();
    node->begin = begin;
    node->end = begin + name.size();
    if (name == "pi" || name == "e") {
      node->kind = ast::Kind::constant;
      node->name = name;
      return node;
    }
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) {
        node->kind = ast::Kind::variable;
        node->var_index = static_cast<int>(i);
        node->name = name;
        return node;
      }
    throw ParseError("unknown identifier '" + name + "'", begin);
  }

  ast::Fn lookup_fn(const std::string& name, size_t at) {
    using ast::Fn;
    if (name == "sin") return Fn::sin;
    if (name == "cos") return Fn::cos;
    if (name == "tan") return Fn::tan;
    if (name == "exp") return Fn::exp;
    if (name == "log") return Fn::log;
    if (name == "sqrt") return Fn::sqrt;
    if (name == "sinh") return Fn::sinh;
    if (name == "cosh") return Fn::cosh;
    if (name == "tanh") return Fn::tanh;
    throw ParseError("unknown function '" + name + "'", at);
  }

  ast::NodePtr make_binary(ast::Kind kind, ast::NodePtr a, ast::NodePtr b, size_t begin) {
    auto node = std::make_unique<ast::Node>();
    node->kind = kind;
    node->a = std::move(a);
    node->b = std::move(b);
    node->begin = begin;
    node->end = node->b->end;
    return node;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char take() { return src_[pos_++]; }

  std::string src_;
  std::vector<std::string> vars_;
  size_t pos_ = 0;
};

}  // namespace detail

class Expression {
 public:
  Expression() = default;

  static Expression parse(const std::string& source, const std::vector<std::string>& variables) {
    Expression e;
    e.source_ = source;
    e.vars_ = variables;
    e.root_ = std::shared_ptr<const ast::Node>(detail::Parser(source, variables).parse().release());
    return e;
  }

  int arity() const { return static_cast<int>(vars_.size()); }
  const std::string& source() const { return source_; }
  const std::vector<std::string>& variables() const { return vars_; }
  bool parsed() const { return root_ != nullptr; }

  double value(const Eigen::VectorXd& point) const {
    check_point(point);
    return eval_value(*root_, point);
  }

  Jet2 jet(const Eigen::VectorXd& point) const {
    check_point(point);
    return eval_jet(*root_, point);
  }

  // Fully parenthesized serialization; reparsing yields a structurally
  // identical tree (tested as a round-trip invariant).
  std::string to_string() const { return print(*root_); }

  bool same_ast(const Expression& other) const {
    return root_ && other.root_ && ast::equal(*root_, *other.root_);
  }

 private:
  void check_point(const Eigen::VectorXd& point) const {
    if (!root_) throw std::logic_error("Expression: not parsed");
    if (point.size() != arity()) throw std::invalid_argument("Expression: point arity mismatch");
  }

  std::string span(const ast::Node& n) const { return source_.substr(n.begin, n.end - n.begin); }

  static bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15; }

  double eval_value(const ast::Node& n, const Eigen::VectorXd& x) const {
    using ast::Kind;
    switch (n.kind) {
      case Kind::number: return n.number;
      case Kind::constant: return n.name == "pi" ? 3.14159265358979323846 : 2.71828182845904523536;
      case Kind::variable: return x[n.var_index];
      case Kind::unary_minus: return -eval_value(*n.a, x);
      case Kind::add: return eval_value(*n.a, x) + eval_value(*n.b, x);
      case Kind::sub: return eval_value(*n.a, x) - eval_value(*n.b, x);
      case Kind::mul: return eval_value(*n.a, x) * eval_value(*n.b, x);
      case Kind::div: {
        const double num = eval_value(*n.a, x), den = eval_value(*n.b, x);
        if (den == 0.0) throw EvalError("division by zero", span(n));
        return num / den;
      }
      case Kind::pow: {
        const double base = eval_value(*n.a, x), ex = eval_value(*n.b, x);
        return pow_value(base, ex, n);
      }
      case Kind::call: return call_value(n.fn, eval_value(*n.a, x), n);
    }
    throw std::logic_error("eval_value: bad node");
  }

  double pow_value(double base, double ex, const ast::Node& n) const {
    if (is_integer(ex)) {
      if (base == 0.0 && ex < 0.0) throw EvalError("zero base with negative exponent", span(n));
      return std::pow(base, ex);
    }
    if (base <= 0.0) throw EvalError("non-integer power of non-positive base", span(n));
    return std::pow(base, ex);
  }

  double call_value(ast::Fn f, double v, const ast::Node& n) const {
    using ast::Fn;
    switch (f) {
      case Fn::sin: return std::sin(v);
      case Fn::cos: return std::cos(v);
      case Fn::tan: return std::tan(v);
      case Fn::exp: return std::exp(v);
      case Fn::log:
        if (v <= 0.0) throw EvalError("log of non-positive value", span(n));
        return std::log(v);
      case Fn::sqrt:
        if (v < 0.0) throw EvalError("sqrt of negative value", span(n));
        return std::sqrt(v);
      case Fn::sinh: return std::sinh(v);
      case Fn::cosh: return std::cosh(v);
      case Fn::tanh: return std::tanh(v);
    }
    throw std::logic_error("call_value: bad fn");
  }

  Jet2 eval_jet(const ast::Node& n, const Eigen::VectorXd& x) const {
    using ast::Kind;
    const int nv = arity();
    switch (n.kind) {
      case Kind::number: return Jet2::constant(n.number, nv);
      case Kind::constant:
        return Jet2::constant(n.name == "pi" ? 3.14159265358979323846 : 2.71828182845904523536, nv);
      case Kind::variable: return Jet2::variable(x[n.var_index], n.var_index, nv);
      case Kind::unary_minus: return -eval_jet(*n.a, x);
      case Kind::add: return eval_jet(*n.a, x) + eval_jet(*n.b, x);
      case Kind::sub: return eval_jet(*n.a, x) - eval_jet(*n.b, x);
      case Kind::mul: return eval_jet(*n.a, x) * eval_jet(*n.b, x);
      case Kind::div: {
        const Jet2 num = eval_jet(*n.a, x), den = eval_jet(*n.b, x);
        if (den.value == 0.0) throw EvalError("division by zero", span(n));
        return num / den;
      }
      case Kind::pow: return pow_jet(n, x);
      case Kind::call: return call_jet(n, x);
    }
    throw std::logic_error("eval_jet: bad node");
  }

  Jet2 pow_jet(const ast::Node& n, const Eigen::VectorXd& x) const {
    const Jet2 base = eval_jet(*n.a, x);
    const Jet2 ex = eval_jet(*n.b, x);
    const bool const_exponent = ex.grad.isZero(0.0) && ex.hess.isZero(0.0);
    if (const_exponent && is_integer(ex.value)) {
      const double k = ex.value;
      if (base.value == 0.0 && k < 0.0) throw EvalError("zero base with negative exponent", span(n));
      if (k == 0.0) return Jet2::constant(1.0, arity());
      const double f = std::pow(base.value, k);
      const double df = k * std::pow(base.value, k - 1.0);
      const double ddf = (k == 1.0) ? 0.0 : k * (k - 1.0) * std::pow(base.value, k - 2.0);
      if (base.value == 0.0 && k < 2.0) {
        // k == 1: exact linear map; avoids 0^-1 in the unused ddf slot
        return base.compose(f, df, 0.0);
      }
      return base.compose(f, df, ddf);
    }
    if (base.value <= 0.0) throw EvalError("non-integer power of non-positive base", span(n));
    // a^b = exp(b log a)
    const Jet2 log_base = base.compose(std::log(base.value), 1.0 / base.value,
                                       -1.0 / (base.value * base.value));
    const Jet2 arg = ex * log_base;
    const double e = std::exp(arg.value);
    return arg.compose(e, e, e);
  }

  Jet2 call_jet(const ast::Node& n, const Eigen::VectorXd& x) const {
    using ast::Fn;
    const Jet2 a = eval_jet(*n.a, x);
    const double v = a.value;
    switch (n.fn) {
      case Fn::sin: return a.compose(std::sin(v), std::cos(v), -std::sin(v));
      case Fn::cos: return a.compose(std::cos(v), -std::sin(v), -std::cos(v));
      case Fn::tan: {
        const double t = std::tan(v), sec2 = 1.0 + t * t;
        return a.compose(t, sec2, 2.0 * t * sec2);
      }
      case Fn::exp: {
        const double e = std::exp(v);
        return a.compose(e, e, e);
      }
      case Fn::log:
        if (v <= 0.0) throw EvalError("log of non-positive value", span(n));
        return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
      case Fn::sqrt: {
        if (v < 0.0) throw EvalError("sqrt of negative value", span(n));
        if (v == 0.0) throw EvalError("sqrt jet at zero", span(n));
        const double r = std::sqrt(v);
        return a.compose(r, 0.5 / r, -0.25 / (r * v));
      }
      case Fn::sinh: return a.compose(std::sinh(v), std::cosh(v), std::sinh(v));
      case Fn::cosh: return a.compose(std::cosh(v), std::sinh(v), std::cosh(v));
      case Fn::tanh: {
        const double t = std::tanh(v), sech2 = 1.0 - t * t;
        return a.compose(t, sech2, -2.0 * t * sech2);
      }
    }
    throw std::logic_error("call_jet: bad fn");
  }

  std::string print(const ast::Node& n) const {
    using ast::Kind;
    switch (n.kind) {
      case Kind::number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        return buf;
      }
      case Kind::constant: return n.name;
      case Kind::variable: return vars_[n.var_index];
      case Kind::unary_minus: return "(-" + print(*n.a) + ")";
      case Kind::add: return "(" + print(*n.a) + " + " + print(*n.b) + ")";
      case Kind::sub: return "(" + print(*n.a) + " - " + print(*n.b) + ")";
      case Kind::mul: return "(" + print(*n.a) + " * " + print(*n.b) + ")";
      case Kind::div: return "(" + print(*n.a) + " / " + print(*n.b) + ")";
      case Kind::pow: return "(" + print(*n.a) + " ^ " + print(*n.b) + ")";
      case Kind::call: return std::string(ast::fn_name(n.fn)) + "(" + print(*n.a) + ")";
    }
    return "?";
  }

  std::string source_;
  std::vector<std::string> vars_;
  std::shared_ptr<const ast::Node> root_;
};

// Conventional variable names x1..xn for an n-dimensional chart.
inline std::vector<std::string> chart_variables(int n) {
  std::vector<std::string> v;
  v.reserve(n);
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

}  // namespace intercurve
