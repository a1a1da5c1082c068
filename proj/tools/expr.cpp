#include "expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "meridian/errors.hpp"

namespace meridian::cli {

enum class Op { num, var, add, sub, mul, div, pow, neg, call };
enum class Fn { sqrt, exp, log, sin, cos, tan, sinh, cosh, tanh, asin, asinh, atan, abs };

struct ExprNode {
  Op op = Op::num;
  double value = 0.0;
  Fn fn = Fn::sqrt;
  std::shared_ptr<const ExprNode> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct FnName {
  std::string_view name;
  Fn fn;
};

constexpr FnName kFunctions[] = {
    {"sqrt", Fn::sqrt}, {"exp", Fn::exp},     {"log", Fn::log},   {"ln", Fn::log},
    {"sin", Fn::sin},   {"cos", Fn::cos},     {"tan", Fn::tan},   {"sinh", Fn::sinh},
    {"cosh", Fn::cosh}, {"tanh", Fn::tanh},   {"asin", Fn::asin}, {"arcsin", Fn::asin},
    {"asinh", Fn::asinh}, {"arcsinh", Fn::asinh}, {"atan", Fn::atan}, {"abs", Fn::abs},
};

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr number(double x) {
  auto n = std::make_shared<ExprNode>();
  n->value = x;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("expression '" + std::string(s_) + "': " + what + " at position " +
                      std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr e = product();
    for (;;) {
      if (accept('+')) {
        e = make(Op::add, e, product());
      } else if (accept('-')) {
        e = make(Op::sub, e, product());
      } else {
        return e;
      }
    }
  }

  NodePtr product() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*')) {
        e = make(Op::mul, e, unary());
      } else if (accept('/')) {
        e = make(Op::div, e, unary());
      } else {
        return e;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // Right-associative; binds tighter than unary minus on its left (-u^2 = -(u^2)).
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double x = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return number(x);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == "u" || id == "t" || id == "v") return make(Op::var);
      if (id == "pi") return number(std::numbers::pi);
      if (id == "e") return number(std::numbers::e);
      for (const auto& f : kFunctions) {
        if (f.name == id) {
          if (!accept('(')) fail("expected '(' after " + std::string(id));
          NodePtr arg = sum();
          if (!accept(')')) fail("expected ')'");
          auto n = std::make_shared<ExprNode>();
          n->op = Op::call;
          n->fn = f.fn;
          n->lhs = std::move(arg);
          return n;
        }
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

template <class T>
T apply(Fn fn, const T& x) {
  switch (fn) {
    case Fn::sqrt: return sqrt(x);
    case Fn::exp: return exp(x);
    case Fn::log: return log(x);
    case Fn::sin: return sin(x);
    case Fn::cos: return cos(x);
    case Fn::tan: return tan(x);
    case Fn::sinh: return sinh(x);
    case Fn::cosh: return cosh(x);
    case Fn::tanh: return tanh(x);
    case Fn::asin: return asin(x);
    case Fn::asinh: return asinh(x);
    case Fn::atan: return atan(x);
    case Fn::abs: return abs(x);
  }
  return x;
}

template <class T>
T eval_node(const ExprNode& n, const T& x) {
  switch (n.op) {
    case Op::num: return T::constant(n.value);
    case Op::var: return x;
    case Op::add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::div: return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
    case Op::pow: return pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case Op::neg: return -eval_node(*n.lhs, x);
    case Op::call: return apply(n.fn, eval_node(*n.lhs, x));
  }
  return x;
}

bool has_var(const ExprNode& n) {
  if (n.op == Op::var) return true;
  return (n.lhs && has_var(*n.lhs)) || (n.rhs && has_var(*n.rhs));
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(text).parse();
  return e;
}

bool Expression::uses_variable() const { return has_var(*root_); }

Jet2 Expression::eval(const Jet2& x) const { return eval_node(*root_, x); }
Jet3 Expression::eval(const Jet3& x) const { return eval_node(*root_, x); }
double Expression::eval(double x) const { return eval_node(*root_, Jet2::constant(x)).v; }

ScalarFn Expression::to_scalar_fn(Interval domain) const {
  auto root = root_;
  if (!uses_variable()) {
    const double c = eval(0.0);
    ScalarFn fn([c](double) { return Jet2::constant(c); }, domain, c);
    fn.with_third([c](double) { return Jet3::constant(c); });
    return fn;
  }
  ScalarFn fn([root](double u) { return eval_node(*root, Jet2::variable(u)); }, domain);
  fn.with_third([root](double u) { return eval_node(*root, Jet3::variable(u)); });
  return fn;
}

}  // namespace meridian::cli
