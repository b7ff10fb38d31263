#include <catch2/catch_amalgamated.hpp>
#include <orlicz/expression.hpp>

#include <cmath>

using namespace orlicz;
using Catch::Matchers::WithinRel;

namespace {

double eval(const char* text, double v = 0.0) { return Expression::parse(text)(v); }

}  // namespace

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(eval("2 + 3 * 4^2") == 50.0);
  CHECK(eval("2^3^2") == 512.0);  // right associative
  CHECK(eval("-2^2") == -4.0);    // unary minus binds looser than the power
  CHECK(eval("(-2)^2") == 4.0);
  CHECK(eval("2^-2") == 0.25);
  CHECK(eval("10 - 4 - 3") == 3.0);
  CHECK(eval("24 / 4 / 2") == 3.0);
  CHECK(eval("1 + 2 * 3 - 4 / 2") == 5.0);
}

TEST_CASE("variables and functions") {
  const auto f = Expression::parse("(1 + x) * log(1 + x) - x");
  CHECK_THAT(f(1.0), WithinRel(2.0 * std::log(2.0) - 1.0, 1e-15));
  CHECK(f.variable() == "x");
  CHECK_FALSE(f.constant());

  const auto g = Expression::parse("1 / n^3");
  CHECK(g(2.0) == 0.125);
  CHECK(g.variable() == "n");

  CHECK_THAT(eval("exp(1)"), WithinRel(std::exp(1.0), 1e-15));
  CHECK_THAT(eval("ln(exp(2))"), WithinRel(2.0, 1e-15));
  CHECK(eval("sqrt(9)") == 3.0);
  CHECK(eval("abs(1 - 4)") == 3.0);
  CHECK_THAT(eval("sqrt(x^2 - 1)", 1.3), WithinRel(std::sqrt(1.3 * 1.3 - 1.0), 1e-15));
}

TEST_CASE("constant formulas report themselves") {
  const auto c = Expression::parse("3 * 4 + exp(0)");
  CHECK(c.constant());
  CHECK(c.variable().empty());
  CHECK(c(123.0) == 13.0);
}

TEST_CASE("division by zero follows ieee semantics") {
  CHECK(std::isinf(eval("1 / x", 0.0)));
  CHECK(std::isnan(eval("0 / x", 0.0)));
}

TEST_CASE("parse errors carry character offsets") {
  const auto offset_of = [](const char* text) {
    try {
      Expression::parse(text);
    } catch (const ExpressionError& e) {
      return static_cast<long>(e.offset);
    }
    return -1L;
  };
  CHECK(offset_of("2 +") == 3);
  CHECK(offset_of("foo(3)") == 0);
  CHECK(offset_of("(2") == 2);
  CHECK(offset_of("2 2") == 2);
  CHECK(offset_of("sqrt 2") >= 0);

  CHECK_THROWS_AS(Expression::parse("x + n"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse(""), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("1 // 2"), ExpressionError);
}

TEST_CASE("parsed text round trips") {
  const auto f = Expression::parse("1 / x^1.5");
  CHECK(f.text() == "1 / x^1.5");
}
