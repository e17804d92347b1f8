#ifndef AAQ_QELIM_HPP
#define AAQ_QELIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aaq/poly.hpp"
#include "aaq/syntax.hpp"

// Elimination of Q-binders. Every atom, viewed along the bound variable, is
// eventually constant, so Q commutes with the Boolean structure and each
// binder is removed by replacing every sign atom with the condition on the
// remaining variables under which it holds for all sufficiently large values
// of the bound variable.

namespace aaq {

struct LimitError : Error {
  using Error::Error;
};

struct EliminationStep {
  std::string variable;
  std::uint64_t atoms_before = 0;
  std::uint64_t atoms_after = 0;
  std::uint64_t nodes_before = 0;
  std::uint64_t nodes_after = 0;
  // Maximum degree of the eliminated variable across the body's atoms.
  std::uint64_t degree = 0;

  // Replacing a degree-d atom by its sign cascade yields at most
  // (d+1)(d+2)/2 atoms, one conjunction per cascade branch.
  bool cost_bound_ok() const;
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;

  bool cost_bound_ok() const;
};

struct ElimOptions {
  std::uint64_t node_limit = 1'000'000;
};

// Condition on the variables other than x under which atom a holds for all
// sufficiently large real x. For kind positive this is the leading-sign
// cascade over the coefficients of a's polynomial in x; for kind zero all
// coefficients must vanish. Ground conjuncts are folded away.
QFPtr atom_at_infinity(const SignAtom& a, const std::string& x);

// body with every sign atom mentioning x replaced by atom_at_infinity;
// equivalent to "Q x. body" at every assignment of the remaining variables.
QFPtr eliminate_q(const std::string& x, const QFPtr& body);

// Full elimination: desugars, normalizes atoms, and removes binders
// innermost-first. The result mentions no Q and only free variables of f.
// Throws LimitError when an intermediate formula exceeds the node limit.
QFPtr eliminate_all(const Formula& f, const ElimOptions& opts = {},
                    EliminationTrace* trace = nullptr);

// Truth-preserving cleanup: folds ground atoms, absorbs truth constants,
// drops duplicate conjuncts/disjuncts, removes double negations. Not a
// canonical form.
QFPtr simplify(const QFPtr& f);

}  // namespace aaq

#endif  // AAQ_QELIM_HPP
