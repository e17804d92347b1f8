#ifndef AAQ_SYNTAX_HPP
#define AAQ_SYNTAX_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

// Abstract syntax, parser and printers for formulas of the ordered-ring
// language whose only binder is Q ("for all sufficiently large").
//
// Concrete grammar (ASCII, whitespace insignificant between tokens):
//
//   formula := 'Q' IDENT '.' formula | disj ('->' formula)?
//   disj    := conj ('||' conj)*
//   conj    := neg ('&&' neg)*
//   neg     := '!' neg | '(' formula ')' | atom
//   atom    := term REL term
//   REL     := '<' | '<=' | '>' | '>=' | '=' | '!='
//   term    := factor (('+' | '-') factor)*
//   factor  := power ('*' power)*
//   power   := base ('^' NUMERAL)?
//   base    := IDENT | NUMERAL | '(' term ')'
//   IDENT   := [a-z][A-Za-z0-9_]*
//   NUMERAL := [0-9]+
//
// Q binds weakest and its body extends maximally to the right; '->' is
// right-associative. A Q that rebinds a variable already bound in scope is
// rejected at parse time.

namespace aaq {

using BigInt = boost::multiprecision::cpp_int;

// Byte range [start, end) into the source text of a parse.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  enum class Kind {
    Syntax,
    DuplicateBinding,
    ExponentNotLiteral,
    SizeLimit,
  };

  ParseError(Kind k, std::string msg, SourceSpan s)
      : Error(std::move(msg)), kind(k), span(s) {}

  Kind kind;
  SourceSpan span;
};

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  std::string name;
};
struct Numeral {
  BigInt value;  // non-negative; surface minus is a binary operator
};
struct Add {
  TermPtr lhs, rhs;
};
struct Sub {
  TermPtr lhs, rhs;
};
struct Mul {
  TermPtr lhs, rhs;
};
struct Pow {
  TermPtr base;
  std::uint64_t exponent;  // concrete literal, never a variable
};

struct Term : std::variant<Var, Numeral, Add, Sub, Mul, Pow> {
  using variant::variant;
};

TermPtr mk_var(std::string name);
TermPtr mk_num(BigInt value);
TermPtr mk_add(TermPtr lhs, TermPtr rhs);
TermPtr mk_sub(TermPtr lhs, TermPtr rhs);
TermPtr mk_mul(TermPtr lhs, TermPtr rhs);
TermPtr mk_pow(TermPtr base, std::uint64_t exponent);

bool term_equal(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return term_equal(a, b); }

// ---------------------------------------------------------------------------
// Formulas

enum class Rel { Lt, Le, Gt, Ge, Eq, Ne };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Atom {
  TermPtr lhs;
  Rel rel;
  TermPtr rhs;
};
struct Not {
  FormulaPtr arg;
};
struct And {
  FormulaPtr lhs, rhs;
};
struct Or {
  FormulaPtr lhs, rhs;
};
struct Implies {
  FormulaPtr lhs, rhs;
};
struct QBinder {
  std::string var;
  FormulaPtr body;
};

struct Formula : std::variant<Atom, Not, And, Or, Implies, QBinder> {
  using variant::variant;
};

FormulaPtr mk_atom(TermPtr lhs, Rel rel, TermPtr rhs);
FormulaPtr mk_not(FormulaPtr arg);
FormulaPtr mk_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_or(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_qbinder(std::string var, FormulaPtr body);

bool formula_equal(const Formula& a, const Formula& b);
inline bool operator==(const Formula& a, const Formula& b) {
  return formula_equal(a, b);
}

// ---------------------------------------------------------------------------
// Operations

inline constexpr std::size_t kDefaultParseNodeLimit = 100'000;

// Parses the ASCII grammar above. Throws ParseError on malformed input,
// rebinding of an in-scope variable, or when the tree exceeds node_limit.
FormulaPtr parse_formula(std::string_view text,
                         std::size_t node_limit = kDefaultParseNodeLimit);

// Parses the fully parenthesized prefix form emitted by PrintFormat::Sexpr.
FormulaPtr parse_sexpr(std::string_view text,
                       std::size_t node_limit = kDefaultParseNodeLimit);

enum class PrintFormat { Text, Sexpr };

std::string print_term(const Term& t, PrintFormat format = PrintFormat::Text);
std::string print_formula(const Formula& f,
                          PrintFormat format = PrintFormat::Text);

// Variables occurring outside the scope of any Q binding them.
std::set<std::string> free_vars(const Formula& f);

// Rewrites to the core fragment: atoms use only < and =, connectives only
// !, && and ||. Numerals, minus and powers stay inside terms; they are
// absorbed later by atom normalization.
FormulaPtr desugar(const Formula& f);

// Number of Term and Formula nodes in the tree.
std::size_t node_count(const Term& t);
std::size_t node_count(const Formula& f);

}  // namespace aaq

#endif  // AAQ_SYNTAX_HPP
