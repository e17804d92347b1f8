#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "aaq/qelim.hpp"
#include "aaq/semantics.hpp"
#include "aaq/syntax.hpp"

using namespace aaq;

namespace {

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  BigInt coeff(int bound) {
    return BigInt(static_cast<std::int64_t>(below(2 * bound + 1)) - bound);
  }
};

Polynomial poly_of(const std::string& term_text) {
  FormulaPtr f = parse_formula(term_text + " = 0");
  return term_to_poly(*std::get<Atom>(*f).lhs);
}

SignAtom pos(const std::string& t) {
  return make_sign_atom(poly_of(t), SignKind::Positive);
}
SignAtom zero(const std::string& t) {
  return make_sign_atom(poly_of(t), SignKind::Zero);
}

Polynomial random_poly(Rng& rng, const std::vector<std::string>& vars,
                       unsigned max_terms, unsigned max_deg, int coeff_bound) {
  Polynomial p;
  unsigned terms = 1 + static_cast<unsigned>(rng.below(max_terms));
  for (unsigned i = 0; i < terms; ++i) {
    Polynomial mono = Polynomial::constant(rng.coeff(coeff_bound));
    unsigned deg = static_cast<unsigned>(rng.below(max_deg + 1));
    for (unsigned d = 0; d < deg; ++d)
      mono = mono * Polynomial::variable(vars[rng.below(vars.size())]);
    p = p + mono;
  }
  return p;
}

QFPtr random_qf(Rng& rng, const std::vector<std::string>& vars,
                unsigned budget) {
  if (budget == 0 || rng.below(100) < 35) {
    SignKind k = rng.below(4) == 0 ? SignKind::Zero : SignKind::Positive;
    return qf_atom(make_sign_atom(random_poly(rng, vars, 3, 3, 5), k));
  }
  switch (rng.below(3)) {
    case 0:
      return qf_and(random_qf(rng, vars, budget / 2),
                    random_qf(rng, vars, budget / 2));
    case 1:
      return qf_or(random_qf(rng, vars, budget / 2),
                   random_qf(rng, vars, budget / 2));
    default:
      return qf_not(random_qf(rng, vars, budget - 1));
  }
}

Env random_env(Rng& rng, const std::vector<std::string>& vars, int bound) {
  Env env;
  for (const std::string& v : vars) env[v] = rng.coeff(bound);
  return env;
}

}  // namespace

TEST_CASE("atom_at_infinity: sign cascade over the coefficients") {
  // y*x^2 + x > 0 eventually iff y > 0, or y = 0 and the next
  // coefficient takes over.
  QFPtr psi = atom_at_infinity(pos("y*x^2 + x"), "x");
  CHECK(*psi == *qf_or(qf_atom(pos("y")), qf_atom(zero("y"))));
  CHECK(print_qf(*psi) == "(y > 0) || (y = 0)");
  CHECK(free_vars(*psi) == std::set<std::string>{"y"});

  // y - x > 0 fails for all large x no matter what y is.
  CHECK(*atom_at_infinity(pos("y - x"), "x") == *qf_false());

  // Degree-zero atoms pass through as the constant-coefficient condition.
  CHECK(*atom_at_infinity(pos("y + 1"), "x") == *qf_atom(pos("y + 1")));
}

TEST_CASE("atom_at_infinity: ground polynomials") {
  CHECK(*atom_at_infinity({Polynomial::zero(), SignKind::Zero}, "x") ==
        *qf_true());
  CHECK(*atom_at_infinity({Polynomial::constant(1), SignKind::Positive},
                          "x") == *qf_true());
  CHECK(*atom_at_infinity({Polynomial::constant(1), SignKind::Zero}, "x") ==
        *qf_false());
}

TEST_CASE("atom_at_infinity: eventual vanishing forces all coefficients") {
  // y*x^2 + x = 0 for all large x would need y = 0 and 1 = 0: impossible.
  CHECK(*atom_at_infinity(zero("y*x^2 + x"), "x") == *qf_false());
  // y*x^2 - y*x^2 + (y - y) is the zero polynomial.
  CHECK(*atom_at_infinity(zero("y*x^2 - y*x^2"), "x") == *qf_true());
  // y*x = 0 eventually iff y = 0.
  CHECK(*atom_at_infinity(zero("y*x"), "x") == *qf_atom(zero("y")));
}

TEST_CASE("eliminate_q substitutes only atoms mentioning the variable") {
  // x*y < x + y: the cascade on (1-y)*x + y.
  QFPtr body = qf_atom(pos("x + y - x*y"));
  QFPtr out = eliminate_q("x", body);
  CHECK(*out == *qf_or(qf_atom(pos("1 - y")),
                       qf_and(qf_atom(zero("1 - y")), qf_atom(pos("y")))));
  // Semantically: x*y < x + y for all large x iff y <= 1.
  for (int y = -5; y <= 5; ++y) {
    CAPTURE(y);
    CHECK(eval_qf(*out, {{"y", y}}) == (y <= 1));
  }

  // Negation rides on the Boolean structure.
  CHECK(*eliminate_q("x", qf_not(qf_atom(pos("y - x")))) == *qf_true());

  // A body that never mentions x is returned unchanged.
  QFPtr no_x = qf_and(qf_atom(pos("y")), qf_atom(zero("z - 1")));
  CHECK(eliminate_q("x", no_x) == no_x);
}

TEST_CASE("eliminate_all removes every binder innermost-first") {
  EliminationTrace trace;
  QFPtr out = eliminate_all(*parse_formula("Q y. Q x. x*y < x + y"), {},
                            &trace);
  CHECK(*out == *qf_false());
  REQUIRE(trace.steps.size() == 2);
  CHECK(trace.steps[0].variable == "x");
  CHECK(trace.steps[1].variable == "y");
  CHECK(trace.cost_bound_ok());
  CHECK(trace.steps[0].degree == 1);
}

TEST_CASE("eliminate_all output is quantifier-free over the input's variables") {
  for (const std::string s :
       {"Q x. y*x^2 + x > 0", "Q x. Q y1. x*y1 > z || x < z",
        "(Q x. x > y) && z < 2"}) {
    CAPTURE(s);
    FormulaPtr f = parse_formula(s);
    QFPtr out = eliminate_all(*f);
    std::set<std::string> out_vars = free_vars(*out);
    std::set<std::string> in_vars = free_vars(*f);
    CHECK(std::includes(in_vars.begin(), in_vars.end(), out_vars.begin(),
                        out_vars.end()));
  }
}

TEST_CASE("eliminate_all is the identity on quantifier-free input") {
  for (const std::string s :
       {"x < y", "x + 2 <= y*y -> y != 0", "!(x = 1) && (y > 0 || x > 3)"}) {
    CAPTURE(s);
    QFPtr once = eliminate_all(*parse_formula(s));
    QFPtr twice = eliminate_all(*qf_to_formula(*once));
    CHECK(*twice == *once);
  }
}

TEST_CASE("node limit aborts oversized eliminations") {
  ElimOptions tiny{.node_limit = 2};
  CHECK_THROWS_AS(eliminate_all(*parse_formula("Q x. y*x^2 + x > 0"), tiny),
                  LimitError);
  // Roomy limits leave the same input alone.
  CHECK_NOTHROW(eliminate_all(*parse_formula("Q x. y*x^2 + x > 0")));
}

TEST_CASE("trace cost bound holds on higher-degree cascades") {
  EliminationTrace trace;
  eliminate_all(*parse_formula(
                    "Q x. y*x^4 + z*x^3 > y*x^2 + z*x + 1 && x*z != y"),
                {}, &trace);
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].degree == 4);
  CHECK(trace.cost_bound_ok());
  // The recorded bound is (d+1)(d+2)/2 per atom.
  const EliminationStep& s = trace.steps[0];
  CHECK(s.atoms_after <= s.atoms_before * 15);
}

TEST_CASE("trichotomy at infinity on randomized atoms") {
  Rng rng(505);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int i = 0; i < 300; ++i) {
    Polynomial p = random_poly(rng, vars, 4, 3, 5);
    Env env = random_env(rng, {"y", "z"}, 7);
    bool grows = eval_qf(*atom_at_infinity({p, SignKind::Positive}, "x"), env);
    bool vanishes = eval_qf(
        *atom_at_infinity(make_sign_atom(p, SignKind::Zero), "x"), env);
    bool falls = eval_qf(*atom_at_infinity({-p, SignKind::Positive}, "x"), env);
    CHECK(int(grows) + int(vanishes) + int(falls) == 1);
  }
}

TEST_CASE("negation duality at sampled assignments") {
  Rng rng(606);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int i = 0; i < 150; ++i) {
    QFPtr body = random_qf(rng, vars, 4);
    Env env = random_env(rng, {"y", "z"}, 7);
    bool lhs = eval_qf(*eliminate_q("x", qf_not(body)), env);
    bool rhs = !eval_qf(*eliminate_q("x", body), env);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("simplify folds constants and duplicates") {
  QFPtr a = qf_atom(pos("x"));
  CHECK(*simplify(qf_and(qf_true(), a)) == *a);
  CHECK(*simplify(qf_or(a, a)) == *a);
  CHECK(*simplify(qf_not(qf_not(a))) == *a);
  CHECK(*simplify(qf_and(a, qf_false())) == *qf_false());
  CHECK(*simplify(qf_or(qf_false(), qf_false())) == *qf_false());
  CHECK(*simplify(qf_atom(pos("3"))) == *qf_true());
  // Nested duplicates across associativity are collapsed.
  CHECK(*simplify(qf_or(qf_or(a, a), a)) == *a);
}

TEST_CASE("simplify preserves truth at sampled assignments") {
  Rng rng(707);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int i = 0; i < 100; ++i) {
    QFPtr f = random_qf(rng, vars, 5);
    QFPtr s = simplify(f);
    for (int j = 0; j < 20; ++j) {
      Env env = random_env(rng, vars, 8);
      CHECK(eval_qf(*f, env) == eval_qf(*s, env));
    }
  }
}
