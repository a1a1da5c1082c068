#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "meridian/jets.hpp"

namespace meridian::cli {

struct ExprNode;

/// Parsed arithmetic expression in one variable.
///
/// Grammar: + - * / ^, parentheses, numbers, the constants pi and e, and the functions
/// sqrt exp log sin cos tan sinh cosh tanh asin asinh atan abs. The variable may be
/// written u, t or v. Throws DomainError with the offending position on a syntax error.
class Expression {
 public:
  static Expression parse(std::string_view text);

  const std::string& text() const { return text_; }
  bool uses_variable() const;

  Jet2 eval(const Jet2& x) const;
  Jet3 eval(const Jet3& x) const;
  double eval(double x) const;

  /// ScalarFn carrying exact second- and third-order jets.
  ScalarFn to_scalar_fn(Interval domain = {}) const;

 private:
  std::string text_;
  std::shared_ptr<const ExprNode> root_;
};

}  // namespace meridian::cli
