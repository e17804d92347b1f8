#include "aaq/qelim.hpp"

#include <algorithm>
#include <map>

namespace aaq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool EliminationStep::cost_bound_ok() const {
  // Cascade over d+1 branches, branch i carrying d-i+1 atoms.
  std::uint64_t factor = (degree + 1) * (degree + 2) / 2;
  return atoms_after <= atoms_before * factor;
}

bool EliminationTrace::cost_bound_ok() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const EliminationStep& s) { return s.cost_bound_ok(); });
}

QFPtr atom_at_infinity(const SignAtom& a, const std::string& x) {
  std::vector<Polynomial> cs = coeffs_in(a.poly, x);  // [c_d, ..., c_0]
  const std::size_t d = cs.size() - 1;

  if (a.kind == SignKind::Zero) {
    // A nonzero univariate polynomial has finitely many roots, so eventual
    // vanishing forces every coefficient to vanish.
    QFPtr conj = qf_true();
    for (const auto& c : cs)
      conj = qf_and_folded(conj,
                           qf_atom_folded(make_sign_atom(c, SignKind::Zero)));
    return conj;
  }

  if (d == 0) return qf_atom_folded(make_sign_atom(cs[0], SignKind::Positive));

  // Branch i: the coefficients above i vanish and c_i is positive, making
  // c_i the effective leading coefficient.
  QFPtr disj = qf_false();
  for (std::size_t i = 0; i <= d; ++i) {
    QFPtr branch = qf_true();
    for (std::size_t j = 0; j < i; ++j)
      branch = qf_and_folded(
          branch, qf_atom_folded(make_sign_atom(cs[j], SignKind::Zero)));
    branch = qf_and_folded(
        branch, qf_atom_folded(make_sign_atom(cs[i], SignKind::Positive)));
    disj = qf_or_folded(disj, std::move(branch));
  }
  return disj;
}

namespace {

QFPtr substitute_atoms(const QFPtr& f, const std::string& x,
                       std::map<SignAtom, QFPtr>& cache) {
  return std::visit(
      overloaded{
          [&](const QFTrue&) { return f; },
          [&](const QFFalse&) { return f; },
          [&](const SignAtom& a) {
            if (!a.poly.mentions(x)) return f;  // already constant along x
            auto it = cache.find(a);
            if (it != cache.end()) return it->second;
            QFPtr repl = atom_at_infinity(a, x);
            cache.emplace(a, repl);
            return repl;
          },
          [&](const QFNot& n) {
            QFPtr arg = substitute_atoms(n.arg, x, cache);
            return arg == n.arg ? f : qf_not_folded(std::move(arg));
          },
          [&](const QFAnd& c) {
            QFPtr lhs = substitute_atoms(c.lhs, x, cache);
            QFPtr rhs = substitute_atoms(c.rhs, x, cache);
            return lhs == c.lhs && rhs == c.rhs
                       ? f
                       : qf_and_folded(std::move(lhs), std::move(rhs));
          },
          [&](const QFOr& o) {
            QFPtr lhs = substitute_atoms(o.lhs, x, cache);
            QFPtr rhs = substitute_atoms(o.rhs, x, cache);
            return lhs == o.lhs && rhs == o.rhs
                       ? f
                       : qf_or_folded(std::move(lhs), std::move(rhs));
          },
      },
      static_cast<const QF::variant&>(*f));
}

}  // namespace

QFPtr eliminate_q(const std::string& x, const QFPtr& body) {
  std::map<SignAtom, QFPtr> cache;
  return substitute_atoms(body, x, cache);
}

namespace {

std::uint64_t max_degree_in(const QFPtr& f, const std::string& x) {
  return std::visit(
      overloaded{
          [&](const QFTrue&) -> std::uint64_t { return 0; },
          [&](const QFFalse&) -> std::uint64_t { return 0; },
          [&](const SignAtom& a) { return a.poly.degree_in(x); },
          [&](const QFNot& n) { return max_degree_in(n.arg, x); },
          [&](const QFAnd& c) {
            return std::max(max_degree_in(c.lhs, x), max_degree_in(c.rhs, x));
          },
          [&](const QFOr& o) {
            return std::max(max_degree_in(o.lhs, x), max_degree_in(o.rhs, x));
          },
      },
      static_cast<const QF::variant&>(*f));
}

struct Eliminator {
  const ElimOptions& opts;
  EliminationTrace* trace;

  void check_limit(const QFPtr& f) const {
    if (qf_node_count(*f) > opts.node_limit) {
      throw LimitError("intermediate formula exceeds node limit of " +
                       std::to_string(opts.node_limit));
    }
  }

  QFPtr eliminate(const Formula& f) {
    return std::visit(
        overloaded{
            [&](const Atom& a) {
              return atom_to_sign_literal(*a.lhs, a.rel, *a.rhs);
            },
            [&](const Not& n) { return qf_not(eliminate(*n.arg)); },
            [&](const And& c) {
              return qf_and(eliminate(*c.lhs), eliminate(*c.rhs));
            },
            [&](const Or& o) {
              return qf_or(eliminate(*o.lhs), eliminate(*o.rhs));
            },
            [&](const Implies&) -> QFPtr {
              throw Error("eliminate: implication survived desugaring");
            },
            [&](const QBinder& q) {
              QFPtr body = eliminate(*q.body);
              EliminationStep step;
              step.variable = q.var;
              step.atoms_before = qf_atom_count(*body);
              step.nodes_before = qf_node_count(*body);
              step.degree = max_degree_in(body, q.var);
              QFPtr out = eliminate_q(q.var, body);
              step.atoms_after = qf_atom_count(*out);
              step.nodes_after = qf_node_count(*out);
              if (!step.cost_bound_ok())
                throw Error("eliminate: cascade exceeded its cost bound");
              if (trace) trace->steps.push_back(std::move(step));
              check_limit(out);
              return out;
            },
        },
        static_cast<const Formula::variant&>(f));
  }
};

}  // namespace

QFPtr eliminate_all(const Formula& f, const ElimOptions& opts,
                    EliminationTrace* trace) {
  if (trace) trace->steps.clear();
  Eliminator e{opts, trace};
  FormulaPtr core = desugar(f);
  QFPtr out = e.eliminate(*core);
  e.check_limit(out);
  return out;
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

enum class Junct { Conj, Disj };

void flatten(const QFPtr& f, Junct j, std::vector<QFPtr>& out) {
  if (j == Junct::Conj) {
    if (const auto* c = std::get_if<QFAnd>(f.get())) {
      flatten(c->lhs, j, out);
      flatten(c->rhs, j, out);
      return;
    }
  } else {
    if (const auto* o = std::get_if<QFOr>(f.get())) {
      flatten(o->lhs, j, out);
      flatten(o->rhs, j, out);
      return;
    }
  }
  out.push_back(f);
}

QFPtr simplify_rec(const QFPtr& f) {
  return std::visit(
      overloaded{
          [&](const QFTrue&) { return f; },
          [&](const QFFalse&) { return f; },
          [&](const SignAtom& a) {
            if (a.poly.is_constant())
              return ground_sign_atom_truth(a) ? qf_true() : qf_false();
            return f;
          },
          [&](const QFNot& n) {
            QFPtr arg = simplify_rec(n.arg);
            if (const auto* inner = std::get_if<QFNot>(arg.get()))
              return inner->arg;
            return qf_not_folded(std::move(arg));
          },
          [&](const QFAnd&) {
            std::vector<QFPtr> parts;
            flatten(f, Junct::Conj, parts);
            std::vector<QFPtr> kept;
            for (const auto& p : parts) {
              QFPtr s = simplify_rec(p);
              if (std::holds_alternative<QFTrue>(*s)) continue;
              if (std::holds_alternative<QFFalse>(*s)) return qf_false();
              bool dup = std::any_of(kept.begin(), kept.end(),
                                     [&](const QFPtr& k) { return *k == *s; });
              if (!dup) kept.push_back(std::move(s));
            }
            if (kept.empty()) return qf_true();
            QFPtr acc = kept.front();
            for (std::size_t i = 1; i < kept.size(); ++i)
              acc = qf_and(std::move(acc), kept[i]);
            return acc;
          },
          [&](const QFOr&) {
            std::vector<QFPtr> parts;
            flatten(f, Junct::Disj, parts);
            std::vector<QFPtr> kept;
            for (const auto& p : parts) {
              QFPtr s = simplify_rec(p);
              if (std::holds_alternative<QFFalse>(*s)) continue;
              if (std::holds_alternative<QFTrue>(*s)) return qf_true();
              bool dup = std::any_of(kept.begin(), kept.end(),
                                     [&](const QFPtr& k) { return *k == *s; });
              if (!dup) kept.push_back(std::move(s));
            }
            if (kept.empty()) return qf_false();
            QFPtr acc = kept.front();
            for (std::size_t i = 1; i < kept.size(); ++i)
              acc = qf_or(std::move(acc), kept[i]);
            return acc;
          },
      },
      static_cast<const QF::variant&>(*f));
}

}  // namespace

QFPtr simplify(const QFPtr& f) { return simplify_rec(f); }

}  // namespace aaq
