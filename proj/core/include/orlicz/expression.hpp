#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

namespace orlicz {

// A formula failed to parse; `offset` is the character position in the text.
class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset(offset) {}

  std::size_t offset;
};

/// A compiled formula in one free variable. The grammar covers numeric
/// literals, the operators + - * / ^ (with ^ binding tightest and
/// associating to the right), unary minus, parentheses, the variable names
/// `x` and `n` (one expression uses at most one of them), and the functions
/// exp, log, ln (alias of log), sqrt, and abs. Evaluation is plain IEEE
/// arithmetic: division by zero and log of nonpositive values produce the
/// usual infinities and NaNs, which the numeric layer downstream treats as
/// divergence evidence.
class Expression {
 public:
  /// Throws ExpressionError with the offending position on malformed input,
  /// unknown names, or a formula mixing both variable names.
  [[nodiscard]] static Expression parse(const std::string& text);

  /// Evaluates with the free variable bound to `v`; constant formulas ignore
  /// the argument.
  [[nodiscard]] double operator()(double v) const;

  [[nodiscard]] const std::string& text() const;
  /// "x", "n", or empty for constant formulas.
  [[nodiscard]] const std::string& variable() const;
  [[nodiscard]] bool constant() const { return variable().empty(); }

  struct Impl;

 private:
  explicit Expression(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

}  // namespace orlicz
