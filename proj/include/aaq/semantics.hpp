#ifndef AAQ_SEMANTICS_HPP
#define AAQ_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aaq/poly.hpp"
#include "aaq/qelim.hpp"
#include "aaq/syntax.hpp"

// Decision of closed sentences, quantifier-free equivalents, ground
// evaluation, and the independent oracles used to cross-check the
// eliminator: a sound root-bound oracle for single-quantifier sentences, a
// heuristic stabilization oracle for nested ones, and an evaluator over the
// ordered ring of integer polynomials in an infinite element t.

namespace aaq {

struct ShapeError : Error {
  using Error::Error;
};

enum class Method { Eliminator, CauchyOracle, WindowOracle, ZtSampler };

const char* method_name(Method m);

struct Verdict {
  bool value = false;
  Method method = Method::Eliminator;
  // False only for window-oracle results that never settled.
  bool stable = true;
  std::optional<EliminationTrace> trace;
};

using Env = std::map<std::string, BigInt>;

// Exact integer evaluation of terms and quantifier-free surface formulas.
// These are Term-level, independent of polynomial normalization.
BigInt eval_term(const Term& t, const Env& env);
bool eval_formula_qfree(const Formula& f, const Env& env);

// Eliminate all binders, then evaluate the ground result exactly. Throws
// ShapeError when f has free variables. The verdict is simultaneously the
// truth value over the naturals and over the reals.
Verdict decide(const Formula& f, const ElimOptions& opts = {});

// simplify(eliminate_all(f)): a quantifier-free formula agreeing with f at
// every natural-number assignment of its free variables.
QFPtr qf_equivalent(const Formula& f, const ElimOptions& opts = {});

// Truth of a quantifier-free formula under exact integer evaluation.
bool eval_qf(const QF& f, const Env& env);

// Sound oracle for closed Boolean combinations of "Q x. body" with
// quantifier-free bodies and a single quantified variable overall: every
// atom has constant sign beyond the maximum of the atoms' root bounds B, so
// the body's truth at x = B is its eventual truth. Never consults the
// elimination cascade.
Verdict oracle_decide_inner(const Formula& f);

struct WindowOptions {
  std::uint64_t base = 32;  // minimum; raised past instantiated root bounds
  std::uint64_t window = 8;
  unsigned levels = 6;  // doublings of base before giving up
};

// Heuristic semi-decision for arbitrary closed sentences: each binder is
// evaluated over windows of consecutive naturals on a doubling schedule,
// taking the topmost window's value and calling it stable when the two
// highest windows are each unanimous and agree. A binder's base starts past
// the root bounds of every atom whose outer variables are already bound, so
// innermost evaluation is exact; only the outer levels stay heuristic.
// stable = false when some binder never settled; used only as a
// cross-check, never as ground truth.
Verdict oracle_decide_window(const Formula& f, const WindowOptions& opts = {});

// ---------------------------------------------------------------------------
// The ordered ring Z[t] with t positive infinite

// Univariate integer polynomial in t, ordered by the sign of the leading
// coefficient of the difference; t exceeds every integer.
class ZtElement {
 public:
  ZtElement() = default;  // zero
  static ZtElement constant(BigInt v);
  static ZtElement t();
  // Coefficients in ascending degree: c[0] + c[1] t + ...
  static ZtElement from_coeffs(std::vector<BigInt> coeffs);

  ZtElement operator+(const ZtElement& o) const;
  ZtElement operator-(const ZtElement& o) const;
  ZtElement operator*(const ZtElement& o) const;
  ZtElement operator-() const;
  ZtElement pow(std::uint64_t e) const;

  bool is_zero() const { return coeffs_.empty(); }
  int sign() const;
  std::uint64_t degree() const;  // 0 for constants and zero
  BigInt leading_coeff() const;
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  // Linear order compatible with the ring operations.
  int compare(const ZtElement& o) const { return (*this - o).sign(); }
  friend bool operator==(const ZtElement& a, const ZtElement& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const ZtElement& a, const ZtElement& b) {
    return a.compare(b) < 0;
  }

  std::string str() const;

 private:
  std::vector<BigInt> coeffs_;  // ascending, no trailing zeros
};

using ZtEnv = std::map<std::string, ZtElement>;

// Truth of a quantifier-free formula with sign atoms evaluated in Z[t].
bool zt_eval_qf(const QF& f, const ZtEnv& env);

// ---------------------------------------------------------------------------
// Corpus reports and cross-checking

struct CorpusInstance {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;  // reproduces this instance alone
  std::string sentence;
  bool decide_value = false;
  bool oracle_value = false;
  Method oracle_method = Method::CauchyOracle;
  bool oracle_stable = true;
};

struct CorpusReport {
  std::uint64_t seed = 0;
  std::uint64_t instance_count = 0;
  std::uint64_t agreement_count = 0;
  std::vector<CorpusInstance> disagreements;
  // Window-oracle instances that never settled; inspected, not failed.
  std::vector<CorpusInstance> unstable;
  // Wall clock; reported on diagnostics only so output stays deterministic.
  double elapsed_ms = 0.0;
};

struct ZtSampleBounds {
  std::uint64_t max_degree = 2;
  std::int64_t coeff_bound = 5;
};

// For a closed "Q x. body" with quantifier-free body mentioning only x:
// enumerate Z[t] elements within the bounds, sorted by the ring order, and
// check that the eliminator's verdict matches the body's truth at every
// sampled element beyond the atoms' root bounds (all elements of positive
// degree with positive leading coefficient, and all integers >= B). Each
// checked element is one instance of the report.
CorpusReport zt_tail_consistency(const Formula& f,
                                 const ZtSampleBounds& bounds = {});

struct CorpusOptions {
  std::uint64_t seed = 42;
  std::uint64_t count = 100;
  unsigned degree = 3;        // max total degree of generated monomials
  unsigned atoms = 4;         // max atoms per sentence
  unsigned min_depth = 1;     // quantifier nesting
  unsigned max_depth = 2;
  ElimOptions elim;
  WindowOptions window;
};

// Deterministic corpus of random closed sentences. Single-quantifier
// instances are compared against oracle_decide_inner (agreement required);
// nested instances against oracle_decide_window (stable disagreements are
// failures, unstable instances are listed).
CorpusReport cross_check(const CorpusOptions& opts);

// The corpus sentence for one instance seed; exposed for reproduction.
FormulaPtr corpus_sentence(std::uint64_t instance_seed,
                           const CorpusOptions& opts);
std::uint64_t corpus_instance_seed(std::uint64_t corpus_seed,
                                   std::uint64_t index);

}  // namespace aaq

#endif  // AAQ_SEMANTICS_HPP
