#ifndef AAQ_POLY_HPP
#define AAQ_POLY_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "aaq/syntax.hpp"

// Exact multivariate polynomial arithmetic over arbitrary-precision integers,
// normalization of atoms to sign conditions, and the quantifier-free formula
// type produced by elimination.

namespace aaq {

struct EvalError : Error {
  using Error::Error;
};

// Product of variable powers; absent variable means exponent 0, stored
// exponents are always >= 1. The empty monomial is 1.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(const std::string& name, std::uint64_t exp = 1);

  Monomial times(const Monomial& other) const;
  // Monomial with the given variable removed.
  Monomial without(const std::string& name) const;

  std::uint64_t exponent_of(const std::string& name) const;
  std::uint64_t total_degree() const;
  bool is_constant() const { return exps_.empty(); }
  const std::map<std::string, std::uint64_t>& exponents() const { return exps_; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Arbitrary total order so monomial-keyed containers compare; the
  // semantic order is GrlexGreater below.
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.exps_ < b.exps_;
  }

 private:
  std::map<std::string, std::uint64_t> exps_;
};

// Graded lexicographic order: higher total degree first, ties broken
// lexicographically with alphabetically earlier variables taking priority.
// This is the fixed global monomial order; it determines leading terms and
// the canonical orientation of equations.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Map from monomials to nonzero coefficients; the zero polynomial is the
// empty map. Representation is canonical: equal polynomials compare equal.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(BigInt c);
  static Polynomial variable(const std::string& name);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial pow(std::uint64_t e) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Value of a constant polynomial (0 for the zero polynomial).
  BigInt constant_value() const;

  // Coefficient of the grlex-leading monomial; 0 for the zero polynomial.
  BigInt leading_coeff() const;
  std::uint64_t total_degree() const;
  std::uint64_t degree_in(const std::string& name) const;
  bool mentions(const std::string& name) const { return degree_in(name) > 0; }
  std::set<std::string> variables() const;
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, BigInt, GrlexGreater>& terms() const { return terms_; }

  // Exact evaluation; throws EvalError if env misses a variable.
  BigInt eval(const std::map<std::string, BigInt>& env) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  // Arbitrary total order, used for atom caches and deduplication.
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    return a.terms_ < b.terms_;
  }

 private:
  void add_term(const Monomial& m, const BigInt& c);

  std::map<Monomial, BigInt, GrlexGreater> terms_;
};

// The polynomial denoted by a term, with numerals as constants and powers
// expanded.
Polynomial term_to_poly(const Term& t);

// Coefficients [c_d, ..., c_0] of p viewed as a polynomial in x, descending
// degree; none mentions x. For p not mentioning x this is [p].
std::vector<Polynomial> coeffs_in(const Polynomial& p, const std::string& x);

// 1 + max_i ceil(|c_i| / |c_d|) over the non-leading coefficients of a
// polynomial in at most one variable: every real root lies in (-B, B), so the
// sign of p equals the sign of its leading coefficient on [B, oo). Constant
// nonzero polynomials yield 1. Throws EvalError on the zero polynomial or
// multivariate input.
BigInt cauchy_bound(const Polynomial& p);

// ---------------------------------------------------------------------------
// Sign atoms and quantifier-free formulas

enum class SignKind { Positive, Zero };

// p > 0 or p = 0. Equations are canonically oriented: the leading coefficient
// is made positive, so p = 0 and -p = 0 normalize identically.
struct SignAtom {
  Polynomial poly;
  SignKind kind;

  friend bool operator==(const SignAtom&, const SignAtom&) = default;
  friend bool operator<(const SignAtom& a, const SignAtom& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.poly < b.poly;
  }
};

SignAtom make_sign_atom(Polynomial p, SignKind kind);

struct QF;
using QFPtr = std::shared_ptr<const QF>;

struct QFTrue {};
struct QFFalse {};
struct QFNot {
  QFPtr arg;
};
struct QFAnd {
  QFPtr lhs, rhs;
};
struct QFOr {
  QFPtr lhs, rhs;
};

struct QF : std::variant<QFTrue, QFFalse, SignAtom, QFNot, QFAnd, QFOr> {
  using variant::variant;
};

QFPtr qf_true();
QFPtr qf_false();
QFPtr qf_atom(SignAtom a);
// Plain structural connectives.
QFPtr qf_not(QFPtr arg);
QFPtr qf_and(QFPtr lhs, QFPtr rhs);
QFPtr qf_or(QFPtr lhs, QFPtr rhs);
// Folding variants: ground atoms become constants and true/false absorb.
QFPtr qf_atom_folded(SignAtom a);
QFPtr qf_not_folded(QFPtr arg);
QFPtr qf_and_folded(QFPtr lhs, QFPtr rhs);
QFPtr qf_or_folded(QFPtr lhs, QFPtr rhs);

bool qf_equal(const QF& a, const QF& b);
inline bool operator==(const QF& a, const QF& b) { return qf_equal(a, b); }

// Truth of a ground sign atom (constant polynomial).
bool ground_sign_atom_truth(const SignAtom& a);

// Normalization of a core atom (post-desugar): t1 < t2 becomes
// SignAtom(rhs - lhs, positive); t1 = t2 becomes the canonically oriented
// difference with kind zero. Only Rel::Lt and Rel::Eq are accepted.
QFPtr atom_to_sign_literal(const Term& lhs, Rel rel, const Term& rhs);

std::set<std::string> free_vars(const QF& f);

// Logical (fully expanded) tree sizes; subtree sharing is counted with
// multiplicity. Both saturate at a large cap instead of overflowing.
std::uint64_t qf_node_count(const QF& f);
std::uint64_t qf_atom_count(const QF& f);

// Surface rendering: sign atoms print with non-negative coefficients on both
// sides ("x*y < x + y" rather than a unary minus), truth constants as
// "0 = 0" / "0 != 0". The result re-parses through parse_formula.
FormulaPtr qf_to_formula(const QF& f);
std::string print_qf(const QF& f, PrintFormat format = PrintFormat::Text);

}  // namespace aaq

#endif  // AAQ_POLY_HPP
