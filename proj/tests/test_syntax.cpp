#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "aaq/syntax.hpp"

using namespace aaq;

namespace {

// Connectives and atoms allowed after desugaring: !, &&, ||, <, =.
bool is_core(const Formula& f) {
  if (const auto* a = std::get_if<Atom>(&f))
    return a->rel == Rel::Lt || a->rel == Rel::Eq;
  if (const auto* n = std::get_if<Not>(&f)) return is_core(*n->arg);
  if (const auto* n = std::get_if<And>(&f))
    return is_core(*n->lhs) && is_core(*n->rhs);
  if (const auto* n = std::get_if<Or>(&f))
    return is_core(*n->lhs) && is_core(*n->rhs);
  if (const auto* n = std::get_if<QBinder>(&f)) return is_core(*n->body);
  return false;  // Implies must be gone
}

}  // namespace

TEST_CASE("parse and print round-trip, both formats") {
  const std::vector<std::string> inputs = {
      "x < 1",
      "1 + 1 = 2",
      "Q x. x^2 > 5*x + 6",
      "Q y. Q x. x*y < x + y",
      "Q x. 2*x = x + x",
      "x + 2*y^2 <= 3 -> y != 0",
      "!(x < y) && (z >= 1 || x = 2)",
      "Q x. y*x^2 + x > 0",
      "Q x. (x > 1 -> x^3 >= x) && !(x = 0)",
  };
  for (const std::string& s : inputs) {
    CAPTURE(s);
    FormulaPtr f = parse_formula(s);
    FormulaPtr again = parse_formula(print_formula(*f));
    CHECK(*again == *f);
    FormulaPtr sexpr = parse_sexpr(print_formula(*f, PrintFormat::Sexpr));
    CHECK(*sexpr == *f);
  }
}

TEST_CASE("sexpr output is fully parenthesized prefix") {
  FormulaPtr f = parse_formula("1 + 1 = 2");
  CHECK(print_formula(*f, PrintFormat::Sexpr) == "(= (+ 1 1) 2)");
  FormulaPtr q = parse_formula("Q x. x > 0");
  CHECK(print_formula(*q, PrintFormat::Sexpr) == "(Q x (> x 0))");
}

TEST_CASE("operator precedence and associativity") {
  // ^ binds tighter than *, * tighter than +.
  CHECK(*parse_formula("x + 2*y^2 < 3") ==
        *parse_formula("x + (2*(y^2)) < 3"));
  // -> is right-associative.
  CHECK(*parse_formula("x > 0 -> y > 0 -> z > 0") ==
        *parse_formula("x > 0 -> (y > 0 -> z > 0)"));
  // ! binds tighter than &&, && tighter than ||.
  CHECK(*parse_formula("! x < 1 && y < 1 || z < 1") ==
        *parse_formula("((!(x < 1)) && y < 1) || z < 1"));
  // Q's body extends maximally to the right.
  FormulaPtr q = parse_formula("Q x. x > 0 || x < 0");
  REQUIRE(std::holds_alternative<QBinder>(*q));
  CHECK(free_vars(*q).empty());
  // Binary minus is left-associative inside terms.
  CHECK(*parse_formula("x - 1 - 1 = 0") == *parse_formula("(x - 1) - 1 = 0"));
}

TEST_CASE("free variables") {
  CHECK(free_vars(*parse_formula("Q x. x*y > z")) ==
        std::set<std::string>{"y", "z"});
  CHECK(free_vars(*parse_formula("Q y. Q x. x*y < x + y")).empty());
  CHECK(free_vars(*parse_formula("x < 1")) == std::set<std::string>{"x"});
  // The same name bound in one branch can be free in another.
  CHECK(free_vars(*parse_formula("(Q x. x > y) && x < 1")) ==
        std::set<std::string>{"x", "y"});
}

TEST_CASE("rebinding an in-scope variable is a parse error") {
  const std::string text = "Q x. Q x. x > 0";
  try {
    parse_formula(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::DuplicateBinding);
    CHECK(e.span.start <= e.span.end);
    CHECK(e.span.end <= text.size());
  }
}

TEST_CASE("parse errors carry a span inside the input") {
  for (const std::string text :
       {"x + < 3", "Q 1. x > 0", "(x < 1", "x <", "", "x ? y"}) {
    CAPTURE(text);
    try {
      parse_formula(text);
      FAIL_CHECK("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.span.start <= e.span.end);
      CHECK(e.span.end <= text.size());
    }
  }
}

TEST_CASE("exponents must be numeric literals") {
  try {
    parse_formula("x ^ y > 0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::ExponentNotLiteral);
  }
}

TEST_CASE("node limit rejects oversized input") {
  try {
    parse_formula("x + x + x + x + x + x + x + x > 0", 5);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::SizeLimit);
  }
  // The same formula parses under the default limit.
  CHECK_NOTHROW(parse_formula("x + x + x + x + x + x + x + x > 0"));
}

TEST_CASE("desugar targets the core fragment") {
  const std::vector<std::string> inputs = {
      "x <= y",
      "x >= y",
      "x != y",
      "x > 0 -> y > 0",
      "Q x. (x >= 1 -> x^2 != x) && !(x <= 0)",
  };
  for (const std::string& s : inputs) {
    CAPTURE(s);
    FormulaPtr d = desugar(*parse_formula(s));
    CHECK(is_core(*d));
    CHECK(*desugar(*d) == *d);                      // idempotent
    CHECK(free_vars(*d) == free_vars(*parse_formula(s)));
  }
}

TEST_CASE("desugar rewrites each sugared relation correctly") {
  CHECK(*desugar(*parse_formula("x <= y")) == *parse_formula("!(y < x)"));
  CHECK(*desugar(*parse_formula("x >= y")) == *parse_formula("!(x < y)"));
  CHECK(*desugar(*parse_formula("x > y")) == *parse_formula("y < x"));
  CHECK(*desugar(*parse_formula("x != y")) == *parse_formula("!(x = y)"));
  CHECK(*desugar(*parse_formula("x < 1 -> y < 1")) ==
        *parse_formula("!(x < 1) || y < 1"));
}

TEST_CASE("numerals are arbitrary precision and leading zeros are accepted") {
  FormulaPtr f = parse_formula("x = 123456789012345678901234567890");
  const auto& atom = std::get<Atom>(*f);
  const auto& num = std::get<Numeral>(*atom.rhs);
  CHECK(num.value == BigInt("123456789012345678901234567890"));
  CHECK(*parse_formula("x = 007") == *parse_formula("x = 7"));
}

TEST_CASE("node_count counts term and formula nodes") {
  // x < 1: two term nodes plus the atom.
  CHECK(node_count(*parse_formula("x < 1")) == 3);
  CHECK(node_count(*parse_formula("Q x. x < 1")) == 4);
  CHECK(node_count(*mk_var("x")) == 1);
  CHECK(node_count(*mk_add(mk_var("x"), mk_num(1))) == 3);
}

TEST_CASE("structural equality distinguishes shape, not spelling") {
  CHECK(*parse_formula("x+1 = 2") == *parse_formula("x + 1 = 2"));
  CHECK_FALSE(*parse_formula("x + 1 = 2") == *parse_formula("1 + x = 2"));
  CHECK_FALSE(*parse_formula("x < 1") == *parse_formula("x <= 1"));
}
