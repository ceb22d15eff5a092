#include <doctest.h>

#include "ncrat/parse.hpp"

using namespace ncrat;

namespace {

ParseError error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseException& ex) {
    return ex.error();
  }
  FAIL("expected a parse error for: ", text);
  return {};
}

}  // namespace

TEST_CASE("single variable and aliases") {
  CHECK(parse("x1") == Expression::variable(1));
  CHECK(parse("x") == Expression::variable(1));
  CHECK(parse("y") == Expression::variable(2));
  CHECK(parse("z") == Expression::variable(3));
  CHECK(parse("x12") == Expression::variable(12));
  CHECK(parse("x2'") == Expression::adjoint_variable(2));
  CHECK(parse("x2''") == Expression::variable(2));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("x1 + x2 * x3") ==
        Expression::sum(Expression::variable(1),
                        Expression::product(Expression::variable(2), Expression::variable(3))));
  CHECK(parse("x1 - x2 + x3") ==
        Expression::sum(Expression::difference(Expression::variable(1), Expression::variable(2)),
                        Expression::variable(3)));
  CHECK(parse("x1 * x2 * x3") ==
        Expression::product(Expression::product(Expression::variable(1), Expression::variable(2)),
                            Expression::variable(3)));
  CHECK(parse("-x1'") == Expression::negation(Expression::adjoint_variable(1)));
  CHECK(parse("-x1 * x2") ==
        Expression::product(Expression::negation(Expression::variable(1)),
                            Expression::variable(2)));
  CHECK(parse("(x1 + x2)^-1") ==
        Expression::inverse(Expression::sum(Expression::variable(1), Expression::variable(2))));
  CHECK(parse("x1^-1^-1") == Expression::inverse(Expression::inverse(Expression::variable(1))));
  CHECK(parse("x1'^-1") == Expression::inverse(Expression::adjoint_variable(1)));
}

TEST_CASE("the Hua-style expression parses with aliases normalized") {
  const Expression e = parse("y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1");
  REQUIRE(e.kind() == ExprKind::Difference);
  const Expression chain = e.left();
  REQUIRE(chain.kind() == ExprKind::Product);
  CHECK(chain.left().kind() == ExprKind::Product);
  CHECK(chain.right() == Expression::inverse(Expression::variable(1)));
  CHECK(e.right() ==
        Expression::inverse(Expression::sum(Expression::variable(1), Expression::variable(2))));
  CHECK(level(e) == 2);
}

TEST_CASE("numbers: reals, imaginaries, folded complex arithmetic") {
  CHECK(parse("3") == Expression::scalar({3.0, 0.0}));
  CHECK(parse("2.5") == Expression::scalar({2.5, 0.0}));
  CHECK(parse("3i") == Expression::scalar({0.0, 3.0}));
  CHECK(parse("-1") == Expression::scalar({-1.0, 0.0}));
  CHECK(parse("1 + 2i") == Expression::scalar({1.0, 2.0}));
  CHECK(parse("(1 - 2i) ") == Expression::scalar({1.0, -2.0}));
  CHECK(parse("2 * 3i") == Expression::scalar({0.0, 6.0}));
  CHECK(parse("1e-05") == Expression::scalar({1e-05, 0.0}));
  // Inversion is never folded: 0^-1 stays a syntactic inverse.
  CHECK(parse("0^-1") == Expression::inverse(Expression::scalar({0.0, 0.0})));
  CHECK(level(parse("0^-1")) == 1);
}

TEST_CASE("whitespace insensitivity and determinism") {
  CHECK(parse("x1+x2*x1") == parse("  x1 +\tx2 * x1 "));
  CHECK(parse("y^-1*(x^-1+y^-1)^-1*x^-1-(x+y)^-1") ==
        parse("y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1"));
}

TEST_CASE("error positions and messages") {
  SUBCASE("operator with missing operand") {
    const ParseError err = error_of("x1 + * x2");
    CHECK(err.byte_offset == 5);
    CHECK(err.message == "expected expression atom");
  }
  SUBCASE("truncated input") {
    const ParseError err = error_of("x1 +");
    CHECK(err.byte_offset == 4);
  }
  SUBCASE("unbalanced parenthesis") {
    const ParseError err = error_of("(x1 + x2");
    CHECK(err.byte_offset == 8);
    CHECK(err.message == "unbalanced parenthesis");
  }
  SUBCASE("unknown token") {
    const ParseError err = error_of("x1 + w");
    CHECK(err.byte_offset == 5);
  }
  SUBCASE("trailing garbage / missing star") {
    const ParseError err = error_of("x1 x2");
    CHECK(err.byte_offset == 3);
    CHECK(err.message == "trailing input after expression");
  }
  SUBCASE("malformed caret") {
    const ParseError err = error_of("x1^2");
    CHECK(err.byte_offset == 2);
  }
  SUBCASE("zero variable index") {
    const ParseError err = error_of("x0");
    CHECK(err.byte_offset == 0);
  }
  SUBCASE("adjoint of a compound expression") {
    const ParseError err = error_of("(x1 + x2)'");
    CHECK(err.byte_offset == 9);
    CHECK(err.message == "adjoint applies only to variables");
  }
  SUBCASE("offsets stay within input length + 1") {
    for (const char* text : {"", "(", "x1++", "^-1", "3i'"}) {
      const ParseError err = error_of(text);
      CHECK(err.byte_offset <= std::string(text).size() + 1);
    }
  }
}
