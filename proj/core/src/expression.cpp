#include "orlicz/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

namespace orlicz {

namespace {

enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt, Abs };

struct Node {
  Op op = Op::Num;
  double value = 0.0;
  int a = -1;
  int b = -1;
};

}  // namespace

struct Expression::Impl {
  std::string text;
  std::string variable;
  std::vector<Node> nodes;
  int root = -1;

  [[nodiscard]] double eval(int i, double v) const {
    const Node& n = nodes[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::Num: return n.value;
      case Op::Var: return v;
      case Op::Add: return eval(n.a, v) + eval(n.b, v);
      case Op::Sub: return eval(n.a, v) - eval(n.b, v);
      case Op::Mul: return eval(n.a, v) * eval(n.b, v);
      case Op::Div: return eval(n.a, v) / eval(n.b, v);
      case Op::Pow: return std::pow(eval(n.a, v), eval(n.b, v));
      case Op::Neg: return -eval(n.a, v);
      case Op::Exp: return std::exp(eval(n.a, v));
      case Op::Log: return std::log(eval(n.a, v));
      case Op::Sqrt: return std::sqrt(eval(n.a, v));
      case Op::Abs: return std::abs(eval(n.a, v));
    }
    return 0.0;
  }
};

namespace {

// Recursive-descent parser over the raw character buffer. Whitespace is
// insignificant everywhere; positions in errors refer to the original text.
class Parser {
 public:
  explicit Parser(const std::string& text, Expression::Impl& out) : text_(text), out_(out) {}

  void run() {
    out_.root = parse_expr();
    skip_space();
    if (pos_ < text_.size()) {
      throw ExpressionError("unexpected trailing input", pos_);
    }
    if (out_.root < 0) throw ExpressionError("empty expression", 0);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[nodiscard]] bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  int push(Node n) {
    out_.nodes.push_back(n);
    return static_cast<int>(out_.nodes.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = push({Op::Add, 0.0, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = push({Op::Sub, 0.0, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push({Op::Mul, 0.0, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = push({Op::Div, 0.0, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^, so -x^2 reads as -(x^2).
  int parse_unary() {
    if (accept('-')) return push({Op::Neg, 0.0, parse_unary(), -1});
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) {
      // Right associative, and the exponent may itself be signed: x^-2.
      return push({Op::Pow, 0.0, base, parse_unary()});
    }
    return base;
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ExpressionError("expected a value", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      if (!accept(')')) throw ExpressionError("missing ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    throw ExpressionError(std::string("unexpected character '") + c + "'", pos_);
  }

  int parse_number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) throw ExpressionError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(ptr - begin);
    return push({Op::Num, value, -1, -1});
  }

  int parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x" || name == "n") {
      if (!out_.variable.empty() && out_.variable != name) {
        throw ExpressionError("expression mixes variables '" + out_.variable + "' and '" + name +
                                  "'",
                              start);
      }
      out_.variable = name;
      return push({Op::Var, 0.0, -1, -1});
    }
    Op fn;
    if (name == "exp") {
      fn = Op::Exp;
    } else if (name == "log" || name == "ln") {
      fn = Op::Log;
    } else if (name == "sqrt") {
      fn = Op::Sqrt;
    } else if (name == "abs") {
      fn = Op::Abs;
    } else {
      throw ExpressionError("unknown name '" + name + "'", start);
    }
    if (!accept('(')) throw ExpressionError("'" + name + "' needs a parenthesized argument", pos_);
    const int arg = parse_expr();
    if (!accept(')')) throw ExpressionError("missing ')'", pos_);
    return push({fn, 0.0, arg, -1});
  }

  const std::string& text_;
  Expression::Impl& out_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  auto impl = std::make_shared<Impl>();
  impl->text = text;
  Parser(text, *impl).run();
  return Expression(std::move(impl));
}

double Expression::operator()(double v) const { return impl_->eval(impl_->root, v); }

const std::string& Expression::text() const { return impl_->text; }

const std::string& Expression::variable() const { return impl_->variable; }

}  // namespace orlicz
