#include "hgl/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace hgl {

namespace {

enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kFunc };
enum class Func { kSin, kCos, kExp, kSqrt, kAbs };

}  // namespace

struct Expr::Node {
  Op op;
  double value = 0.0;          // kConst
  int var = 0;                 // kVar, zero-based
  Func func = Func::kSin;      // kFunc
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Node n) {
  return std::make_shared<const Expr::Node>(std::move(n));
}

class Parser {
 public:
  Parser(const std::string& text, int n_vars) : text_(text), n_vars_(n_vars) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = make_node({.op = Op::kAdd, .lhs = lhs, .rhs = parse_term()});
      } else if (accept('-')) {
        lhs = make_node({.op = Op::kSub, .lhs = lhs, .rhs = parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = make_node({.op = Op::kMul, .lhs = lhs, .rhs = parse_unary()});
      } else if (accept('/')) {
        lhs = make_node({.op = Op::kDiv, .lhs = lhs, .rhs = parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (accept('-'))
      return make_node({.op = Op::kNeg, .lhs = parse_unary()});
    return parse_power();
  }

  // '^' binds tighter than unary minus and is right associative; the
  // exponent may itself carry a sign, e.g. "2^-3".
  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (accept('^'))
      return make_node({.op = Op::kPow, .lhs = base, .rhs = parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();
    throw ParseError(std::string("syntax error near '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("invalid number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return make_node({.op = Op::kConst, .value = v});
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);

    if (name == "pi")
      return make_node({.op = Op::kConst, .value = std::numbers::pi});

    if (name.size() >= 2 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      int idx = std::atoi(name.c_str() + 1);
      if (idx < 1 || idx > n_vars_)
        throw ParseError("variable '" + name + "' out of range (dim " +
                             std::to_string(n_vars_) + ")",
                         start);
      return make_node({.op = Op::kVar, .var = idx - 1});
    }

    Func f;
    if (name == "sin") f = Func::kSin;
    else if (name == "cos") f = Func::kCos;
    else if (name == "exp") f = Func::kExp;
    else if (name == "sqrt") f = Func::kSqrt;
    else if (name == "abs") f = Func::kAbs;
    else throw ParseError("unknown identifier '" + name + "'", start);

    skip_ws();
    if (!accept('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
    NodePtr arg = parse_sum();
    skip_ws();
    if (accept(',')) throw ParseError("'" + name + "' takes one argument", pos_ - 1);
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    return make_node({.op = Op::kFunc, .func = f, .lhs = arg});
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  int n_vars_;
  std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar: return x[static_cast<std::size_t>(n.var)];
    case Op::kAdd: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::kSub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::kMul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::kDiv: return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
    case Op::kPow: return std::pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case Op::kNeg: return -eval_node(*n.lhs, x);
    case Op::kFunc: {
      double a = eval_node(*n.lhs, x);
      switch (n.func) {
        case Func::kSin: return std::sin(a);
        case Func::kCos: return std::cos(a);
        case Func::kExp: return std::exp(a);
        case Func::kSqrt: return std::sqrt(a);
        case Func::kAbs: return std::abs(a);
      }
    }
  }
  return 0.0;
}

}  // namespace

Expr Expr::parse(const std::string& text, int n_vars) {
  if (text.empty()) throw ParseError("empty expression", 0);
  Expr e;
  e.root_ = Parser(text, n_vars).run();
  e.n_vars_ = n_vars;
  e.text_ = text;
  return e;
}

double Expr::eval(std::span<const double> x) const {
  return eval_node(*root_, x);
}

}  // namespace hgl
