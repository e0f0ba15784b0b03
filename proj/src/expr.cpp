#include "tauber/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "tauber/errors.hpp"

namespace tauber {

// expr  := term (('+' | '-') term)*
// term  := unary (('*' | '/') unary)*
// unary := ('+' | '-') unary | power
// power := atom ('^' unary)?
// atom  := number | variable | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(Expression& out, const std::string& src, const std::string& var)
      : out_(out), src_(src), var_(var) {}

  int parse() {
    const int root = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + src_ + "\" at position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(char op, double value, int lhs = -1, int rhs = -1) {
    out_.nodes_.push_back({op, value, lhs, rhs});
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = add('+', 0, lhs, term());
      } else if (eat('-')) {
        lhs = add('-', 0, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = add('*', 0, lhs, unary());
      } else if (eat('/')) {
        lhs = add('/', 0, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (eat('-')) return add('~', 0, unary());
    if (eat('+')) return unary();
    return power();
  }

  int power() {
    const int base = atom();
    if (eat('^')) return add('^', 0, base, unary());
    return base;
  }

  int atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end");
    if (eat('(')) {
      const int inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* begin = src_.data() + pos_;
      const auto [end, ec] = std::from_chars(begin, src_.data() + src_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return add('c', v);
    }
    if (src_.compare(pos_, var_.size(), var_) == 0) {
      const std::size_t after = pos_ + var_.size();
      if (after == src_.size() || !std::isalnum(static_cast<unsigned char>(src_[after]))) {
        pos_ = after;
        return add('v', 0);
      }
    }
    fail("unknown symbol");
  }

  Expression& out_;
  const std::string& src_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& source, const std::string& variable) {
  Expression e;
  e.source_ = source;
  ExpressionParser p(e, e.source_, variable);
  e.root_ = p.parse();
  return e;
}

double Expression::operator()(double value) const { return eval(root_, value); }

double Expression::eval(int i, double v) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.op) {
    case 'c':
      return n.value;
    case 'v':
      return v;
    case '~':
      return -eval(n.lhs, v);
    case '+':
      return eval(n.lhs, v) + eval(n.rhs, v);
    case '-':
      return eval(n.lhs, v) - eval(n.rhs, v);
    case '*':
      return eval(n.lhs, v) * eval(n.rhs, v);
    case '/':
      return eval(n.lhs, v) / eval(n.rhs, v);
    case '^':
      return std::pow(eval(n.lhs, v), eval(n.rhs, v));
  }
  return std::nan("");
}

}  // namespace tauber
