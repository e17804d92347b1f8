#include <doctest.h>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

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

ZtElement zt(std::vector<BigInt> ascending) {
  return ZtElement::from_coeffs(std::move(ascending));
}

bool same_report(const CorpusReport& a, const CorpusReport& b) {
  auto same_inst = [](const CorpusInstance& x, const CorpusInstance& y) {
    return x.index == y.index && x.seed == y.seed && x.sentence == y.sentence &&
           x.decide_value == y.decide_value && x.oracle_value == y.oracle_value &&
           x.oracle_method == y.oracle_method && x.oracle_stable == y.oracle_stable;
  };
  if (a.seed != b.seed || a.instance_count != b.instance_count ||
      a.agreement_count != b.agreement_count ||
      a.disagreements.size() != b.disagreements.size() ||
      a.unstable.size() != b.unstable.size())
    return false;
  for (std::size_t i = 0; i < a.disagreements.size(); ++i)
    if (!same_inst(a.disagreements[i], b.disagreements[i])) return false;
  for (std::size_t i = 0; i < a.unstable.size(); ++i)
    if (!same_inst(a.unstable[i], b.unstable[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("term evaluation is exact integer arithmetic") {
  FormulaPtr f = parse_formula("y*x^2 + x = 0");
  const Term& t = *std::get<Atom>(*f).lhs;
  CHECK(eval_term(t, {{"x", 2}, {"y", -1}}) == -2);
  CHECK_THROWS_AS(eval_term(t, {{"x", 2}}), EvalError);
  FormulaPtr big = parse_formula("x^64 = 0");
  CHECK(eval_term(*std::get<Atom>(*big).lhs, {{"x", 2}}) ==
        BigInt("18446744073709551616"));
}

TEST_CASE("quantifier-free surface evaluation") {
  Env env{{"x", 3}, {"y", 4}};
  CHECK(eval_formula_qfree(*parse_formula("x < y"), env));
  CHECK(eval_formula_qfree(*parse_formula("x <= 3 && y >= 4"), env));
  CHECK(eval_formula_qfree(*parse_formula("x = y -> 0 != 0"), env));
  CHECK_FALSE(eval_formula_qfree(*parse_formula("!(x*y = 12)"), env));
  CHECK_THROWS_AS(eval_formula_qfree(*parse_formula("Q x. x > 0"), {}),
                  ShapeError);
}

TEST_CASE("decide on pinned sentences") {
  CHECK(decide(*parse_formula("Q x. x^2 > 5*x + 6")).value);
  CHECK_FALSE(decide(*parse_formula("Q y. Q x. x*y < x + y")).value);
  CHECK(decide(*parse_formula("Q x. 2*x = x + x")).value);
  Verdict v = decide(*parse_formula("Q x. x^2 > 5*x + 6"));
  CHECK(v.method == Method::Eliminator);
  CHECK(v.stable);
  REQUIRE(v.trace.has_value());
  CHECK(v.trace->steps.size() == 1);
  CHECK(v.trace->cost_bound_ok());
}

TEST_CASE("decide rejects open formulas") {
  CHECK_THROWS_AS(decide(*parse_formula("x < 1")), ShapeError);
  CHECK_THROWS_AS(decide(*parse_formula("Q x. x > y")), ShapeError);
}

TEST_CASE("qf_equivalent matches the sentence at every sampled point") {
  QFPtr qf = qf_equivalent(*parse_formula("Q x. y*x^2 + x > 0"));
  CHECK(print_qf(*qf) == "(y > 0) || (y = 0)");
  for (int y = -10; y <= 10; ++y) {
    CAPTURE(y);
    // Instantiate y in the sentence and decide the resulting closed form.
    FormulaPtr inst = parse_formula(
        "Q x. " + std::string(y < 0 ? "0 - " + std::to_string(-y) : std::to_string(y)) +
        "*x^2 + x > 0");
    CHECK(decide(*inst).value == eval_qf(*qf, {{"y", y}}));
  }
  CHECK(*qf_equivalent(*parse_formula("Q x. x < y")) == *qf_false());
  // Quantifier-free input comes back as its own normalization.
  QFPtr norm = qf_equivalent(*parse_formula("2*x = x + x"));
  CHECK(*norm == *qf_true());
}

TEST_CASE("eval_qf boundary cases") {
  QFPtr qf = qf_equivalent(*parse_formula("Q x. y*x^2 + x > 0"));
  CHECK(eval_qf(*qf, {{"y", 0}}));
  CHECK_FALSE(eval_qf(*qf, {{"y", -1}}));
  QFPtr atom = eliminate_all(*parse_formula("x^2 - 1 > 0"));
  CHECK_FALSE(eval_qf(*atom, {{"x", 1}}));
  CHECK(eval_qf(*atom, {{"x", 2}}));
  CHECK_THROWS_AS(eval_qf(*atom, {}), EvalError);
}

TEST_CASE("eval_qf agrees with term-level evaluation after normalization") {
  Rng rng(808);
  for (int i = 0; i < 200; ++i) {
    // Random atom built from the surface grammar; negative coefficients
    // arise through binary minus, the only sign the grammar has.
    std::string rels[] = {"<", "<=", ">", ">=", "=", "!="};
    std::string ops[] = {" + ", " - "};
    std::string lhs = std::to_string(rng.below(9)) + "*x^" +
                      std::to_string(1 + rng.below(3)) + ops[rng.below(2)] +
                      std::to_string(rng.below(9)) + "*y";
    std::string rhs = std::to_string(rng.below(9)) + "*x*y" +
                      ops[rng.below(2)] + std::to_string(rng.below(9));
    std::string text = lhs + " " + rels[rng.below(6)] + " " + rhs;
    CAPTURE(text);
    FormulaPtr f = parse_formula(text);
    Env env{{"x", rng.coeff(10)}, {"y", rng.coeff(10)}};
    CHECK(eval_formula_qfree(*f, env) == eval_qf(*eliminate_all(*f), env));
  }
}

TEST_CASE("root-bound oracle on single-quantifier sentences") {
  Verdict v = oracle_decide_inner(*parse_formula("Q x. x^2 > 5*x + 6"));
  CHECK(v.value);
  CHECK(v.method == Method::CauchyOracle);
  CHECK(v.stable);
  CHECK_FALSE(oracle_decide_inner(*parse_formula("Q x. x < 5")).value);
  CHECK(oracle_decide_inner(*parse_formula("Q x. 0 = 0")).value);
  // Boolean combinations of self-contained binders are in scope.
  CHECK(oracle_decide_inner(
            *parse_formula("(Q x. x > 3) && !(Q x. x < 5)"))
            .value);
}

TEST_CASE("root-bound oracle rejects nesting and open bodies") {
  CHECK_THROWS_AS(oracle_decide_inner(*parse_formula("Q y. Q x. x*y < x + y")),
                  ShapeError);
  CHECK_THROWS_AS(oracle_decide_inner(*parse_formula("Q x. x > y")),
                  ShapeError);
  CHECK_THROWS_AS(oracle_decide_inner(*parse_formula("x > 1")), ShapeError);
}

TEST_CASE("window oracle on pinned sentences") {
  Verdict v = oracle_decide_window(*parse_formula("Q y. Q x. x*y < x + y"));
  CHECK_FALSE(v.value);
  CHECK(v.stable);
  CHECK(v.method == Method::WindowOracle);
  CHECK(oracle_decide_window(*parse_formula("Q x. x >= 0")).value);
  // A base below the sentence's root bound is raised past it, so the mixed
  // early window never corrupts the verdict.
  WindowOptions low{.base = 2, .window = 8, .levels = 6};
  Verdict w = oracle_decide_window(*parse_formula("Q x. x^2 > 5*x + 6"), low);
  CHECK(w.value);
  CHECK(w.stable);
}

TEST_CASE("window oracle validates its input") {
  CHECK_THROWS_AS(oracle_decide_window(*parse_formula("x > 1")), ShapeError);
  WindowOptions bad{.base = 32, .window = 0, .levels = 3};
  CHECK_THROWS_AS(oracle_decide_window(*parse_formula("Q x. x > 1"), bad),
                  ShapeError);
}

TEST_CASE("stable window verdicts match the eliminator") {
  for (const std::string s :
       {"Q x. Q y. x + y > 3", "Q z. Q x. x > z || x*z < 1",
        "Q y. Q x. x*x > y*y", "Q x. Q y. y >= x -> y + 1 > x"}) {
    CAPTURE(s);
    Verdict w = oracle_decide_window(*parse_formula(s));
    if (w.stable) CHECK(w.value == decide(*parse_formula(s)).value);
  }
}

TEST_CASE("Z[t] arithmetic and ordering") {
  ZtElement t = ZtElement::t();
  CHECK((t + ZtElement::constant(1)) * (t - ZtElement::constant(1)) ==
        zt({-1, 0, 1}));
  CHECK(t.pow(3) == zt({0, 0, 0, 1}));
  CHECK(ZtElement().is_zero());
  CHECK(zt({1, 0, 0}) == ZtElement::constant(1));  // trailing zeros trimmed
  CHECK(zt({1, 0, 0}).degree() == 0);

  // t is positive infinite: bigger than every constant.
  CHECK(ZtElement::constant(1000000) < t);
  CHECK(t < t * t);
  CHECK(zt({5, 1}) < zt({1, 2}));  // t + 5 < 2t + 1
  CHECK(-t < ZtElement::constant(-1000000));
  CHECK(zt({0, 0, 1}).sign() == 1);
  CHECK(zt({7, 0, -1}).sign() == -1);
  CHECK(ZtElement().sign() == 0);
  CHECK(zt({0, 2}).leading_coeff() == 2);
}

TEST_CASE("Z[t] rendering") {
  CHECK(zt({1, -3, 5}).str() == "5*t^2 - 3*t + 1");
  CHECK(ZtElement::t().str() == "t");
  CHECK(zt({0, 0, -1}).str() == "-t^2");
  CHECK(ZtElement().str() == "0");
  CHECK(ZtElement::constant(-7).str() == "-7");
}

TEST_CASE("Z[t] satisfies the ordered-ring axioms on random elements") {
  Rng rng(909);
  auto random_zt = [&] {
    std::vector<BigInt> cs;
    std::uint64_t deg = rng.below(3);
    for (std::uint64_t k = 0; k <= deg; ++k) cs.push_back(rng.coeff(5));
    return ZtElement::from_coeffs(std::move(cs));
  };
  for (int i = 0; i < 300; ++i) {
    ZtElement a = random_zt(), b = random_zt(), c = random_zt();
    // Trichotomy.
    CHECK(int(a < b) + int(b < a) + int(a == b) == 1);
    // Translation invariance and positivity of products.
    if (a < b) CHECK(a + c < b + c);
    if (ZtElement() < a && ZtElement() < b) CHECK(ZtElement() < a * b);
    // Ring sanity rides along.
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("Z[t] evaluation of sign atoms") {
  QFPtr f = eliminate_all(*parse_formula("x > 3"));
  CHECK(zt_eval_qf(*f, {{"x", ZtElement::t()}}));
  QFPtr g = eliminate_all(*parse_formula("x^2 > x"));
  CHECK(zt_eval_qf(*g, {{"x", ZtElement::t()}}));
  // At a large negative element the square still dominates.
  CHECK(zt_eval_qf(*g, {{"x", -ZtElement::t()}}));
  CHECK_THROWS_AS(zt_eval_qf(*f, {}), EvalError);
}

TEST_CASE("ground formulas agree between Z and Z[t]") {
  Rng rng(1010);
  for (int i = 0; i < 200; ++i) {
    BigInt a = rng.coeff(9), b = rng.coeff(9);
    std::string rels[] = {"<", "<=", ">", ">=", "=", "!="};
    std::string ops[] = {" + ", " - "};
    std::string text = "x*x" + ops[rng.below(2)] +
                       std::to_string(rng.below(9)) + "*y" + ops[rng.below(2)] +
                       std::to_string(rng.below(9)) + " " + rels[rng.below(6)] +
                       " y*x" + ops[rng.below(2)] + std::to_string(rng.below(9));
    FormulaPtr f = parse_formula(text);
    QFPtr qf = eliminate_all(*f);
    Env zenv{{"x", a}, {"y", b}};
    ZtEnv tenv{{"x", ZtElement::constant(a)}, {"y", ZtElement::constant(b)}};
    CHECK(eval_qf(*qf, zenv) == zt_eval_qf(*qf, tenv));
  }
}

TEST_CASE("Z[t] tail consistency of decided sentences") {
  CorpusReport rep =
      zt_tail_consistency(*parse_formula("Q x. x^2 > 5*x + 6"));
  CHECK(rep.instance_count > 0);
  CHECK(rep.agreement_count == rep.instance_count);
  CHECK(rep.disagreements.empty());

  // A false sentence must fail cofinally; x < 5 fails at t, 2t, t^2, ...
  rep = zt_tail_consistency(*parse_formula("Q x. x < 5"));
  CHECK(rep.agreement_count == rep.instance_count);
  CHECK(rep.disagreements.empty());

  // A sentence with no x-atoms at all is vacuously consistent.
  rep = zt_tail_consistency(*parse_formula("Q x. 0 = 0"));
  CHECK(rep.disagreements.empty());
  CHECK(rep.agreement_count == rep.instance_count);
}

TEST_CASE("Z[t] tail consistency enforces its input shape") {
  CHECK_THROWS_AS(zt_tail_consistency(*parse_formula("Q y. Q x. x*y < x + y")),
                  ShapeError);
  CHECK_THROWS_AS(zt_tail_consistency(*parse_formula("Q x. x > y")),
                  ShapeError);
  CHECK_THROWS_AS(zt_tail_consistency(*parse_formula("x > 1")), ShapeError);
}

TEST_CASE("cross_check agreement on a single-quantifier corpus") {
  CorpusOptions opts;
  opts.seed = 42;
  opts.count = 100;
  opts.degree = 2;
  opts.min_depth = 1;
  opts.max_depth = 1;
  CorpusReport rep = cross_check(opts);
  CHECK(rep.instance_count == 100);
  CHECK(rep.agreement_count == 100);
  CHECK(rep.disagreements.empty());
  CHECK(rep.unstable.empty());
}

TEST_CASE("cross_check is deterministic and total") {
  CorpusOptions opts;
  opts.count = 40;
  opts.max_depth = 2;
  CorpusReport a = cross_check(opts);
  CorpusReport b = cross_check(opts);
  CHECK(same_report(a, b));

  opts.count = 0;
  CorpusReport empty = cross_check(opts);
  CHECK(empty.instance_count == 0);
  CHECK(empty.agreement_count == 0);
  CHECK(empty.disagreements.empty());
  CHECK(empty.unstable.empty());
}

TEST_CASE("corpus sentences regenerate from their instance seed") {
  CorpusOptions opts;
  std::uint64_t s3 = corpus_instance_seed(opts.seed, 3);
  CHECK(s3 == corpus_instance_seed(opts.seed, 3));
  CHECK(print_formula(*corpus_sentence(s3, opts)) ==
        print_formula(*corpus_sentence(s3, opts)));
  CHECK(free_vars(*corpus_sentence(s3, opts)).empty());
}
