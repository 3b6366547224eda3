#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>

namespace hgl {

// Raised on malformed input; `offset` is the byte position in the source text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset(offset) {}
  std::size_t offset;
};

// Closed-form scalar expression in variables x1..xN.
//
// Grammar (precedence low to high): + -  |  * /  |  unary -  |  ^ (right
// associative)  |  literals, pi, x1..xN, sin/cos/exp/sqrt/abs(expr), (expr).
class Expr {
 public:
  Expr() = default;

  // Parses `text`; only variables x1..xN may appear.
  static Expr parse(const std::string& text, int n_vars);

  double eval(std::span<const double> x) const;
  double eval(double x1, double x2) const { return eval({{x1, x2}}); }

  int n_vars() const { return n_vars_; }
  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  int n_vars_ = 0;
  std::string text_;
};

}  // namespace hgl
