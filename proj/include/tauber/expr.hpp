#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tauber {

/// Arithmetic in one variable: numbers, the variable, + - * / ^ and
/// parentheses. Parsed once, evaluated many times.
class Expression {
 public:
  /// Throws ParseError with the offending position.
  static Expression parse(const std::string& source, const std::string& variable = "n");

  double operator()(double value) const;
  const std::string& source() const { return source_; }

 private:
  struct Node {
    char op = 0;  // 'c' constant, 'v' variable, '~' negation, or a binary operator
    double value = 0.0;
    int lhs = -1, rhs = -1;
  };
  double eval(int node, double v) const;

  std::string source_;
  std::vector<Node> nodes_;
  int root_ = -1;

  friend class ExpressionParser;
};

}  // namespace tauber
