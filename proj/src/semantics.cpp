#include "aaq/semantics.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

namespace aaq {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

BigInt bigint_pow(BigInt base, std::uint64_t e) {
  BigInt acc = 1;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

bool rel_holds(const BigInt& l, Rel rel, const BigInt& r) {
  switch (rel) {
    case Rel::Lt:
      return l < r;
    case Rel::Le:
      return l <= r;
    case Rel::Gt:
      return l > r;
    case Rel::Ge:
      return l >= r;
    case Rel::Eq:
      return l == r;
    case Rel::Ne:
      return l != r;
  }
  return false;  // unreachable
}

bool contains_binder(const Formula& f) {
  return std::visit(
      overloaded{
          [](const Atom&) { return false; },
          [](const Not& n) { return contains_binder(*n.arg); },
          [](const And& n) {
            return contains_binder(*n.lhs) || contains_binder(*n.rhs);
          },
          [](const Or& n) {
            return contains_binder(*n.lhs) || contains_binder(*n.rhs);
          },
          [](const Implies& n) {
            return contains_binder(*n.lhs) || contains_binder(*n.rhs);
          },
          [](const QBinder&) { return true; },
      },
      f);
}

std::uint64_t q_depth(const Formula& f) {
  return std::visit(
      overloaded{
          [](const Atom&) -> std::uint64_t { return 0; },
          [](const Not& n) { return q_depth(*n.arg); },
          [](const And& n) {
            return std::max(q_depth(*n.lhs), q_depth(*n.rhs));
          },
          [](const Or& n) {
            return std::max(q_depth(*n.lhs), q_depth(*n.rhs));
          },
          [](const Implies& n) {
            return std::max(q_depth(*n.lhs), q_depth(*n.rhs));
          },
          [](const QBinder& q) { return q_depth(*q.body) + 1; },
      },
      f);
}

void collect_atoms(const Formula& f, std::vector<const Atom*>& out) {
  std::visit(overloaded{
                 [&](const Atom& a) { out.push_back(&a); },
                 [&](const Not& n) { collect_atoms(*n.arg, out); },
                 [&](const And& n) {
                   collect_atoms(*n.lhs, out);
                   collect_atoms(*n.rhs, out);
                 },
                 [&](const Or& n) {
                   collect_atoms(*n.lhs, out);
                   collect_atoms(*n.rhs, out);
                 },
                 [&](const Implies& n) {
                   collect_atoms(*n.lhs, out);
                   collect_atoms(*n.rhs, out);
                 },
                 [&](const QBinder& q) { collect_atoms(*q.body, out); },
             },
             f);
}

// Max of the atoms' root bounds: beyond it every atom polynomial of the body
// keeps the sign of its leading coefficient. Constant atoms contribute
// nothing; the bound is at least 1.
BigInt body_root_bound(const Formula& body) {
  std::vector<const Atom*> atoms;
  collect_atoms(body, atoms);
  BigInt bound = 1;
  for (const Atom* a : atoms) {
    Polynomial p = term_to_poly(*a->lhs) - term_to_poly(*a->rhs);
    if (p.is_constant()) continue;
    bound = std::max(bound, cauchy_bound(p));
  }
  return bound;
}

// Plug the environment's values into p, leaving a polynomial in the
// remaining variables.
Polynomial instantiate(const Polynomial& p, const Env& env) {
  Polynomial out;
  for (const auto& [mono, coeff] : p.terms()) {
    Polynomial piece = Polynomial::constant(coeff);
    for (const auto& [name, exp] : mono.exponents()) {
      auto it = env.find(name);
      if (it != env.end())
        piece = piece * Polynomial::constant(bigint_pow(it->second, exp));
      else
        piece = piece * Polynomial::variable(name).pow(exp);
    }
    out = out + piece;
  }
  return out;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Eliminator:
      return "eliminator";
    case Method::CauchyOracle:
      return "cauchy_oracle";
    case Method::WindowOracle:
      return "window_oracle";
    case Method::ZtSampler:
      return "zt_sampler";
  }
  return "?";
}

BigInt eval_term(const Term& t, const Env& env) {
  return std::visit(
      overloaded{
          [&](const Var& v) -> BigInt {
            auto it = env.find(v.name);
            if (it == env.end())
              throw EvalError("no value bound for variable '" + v.name + "'");
            return it->second;
          },
          [&](const Numeral& n) -> BigInt { return n.value; },
          [&](const Add& n) -> BigInt {
            return eval_term(*n.lhs, env) + eval_term(*n.rhs, env);
          },
          [&](const Sub& n) -> BigInt {
            return eval_term(*n.lhs, env) - eval_term(*n.rhs, env);
          },
          [&](const Mul& n) -> BigInt {
            return eval_term(*n.lhs, env) * eval_term(*n.rhs, env);
          },
          [&](const Pow& n) -> BigInt {
            return bigint_pow(eval_term(*n.base, env), n.exponent);
          },
      },
      t);
}

bool eval_formula_qfree(const Formula& f, const Env& env) {
  return std::visit(
      overloaded{
          [&](const Atom& a) {
            return rel_holds(eval_term(*a.lhs, env), a.rel,
                             eval_term(*a.rhs, env));
          },
          [&](const Not& n) { return !eval_formula_qfree(*n.arg, env); },
          [&](const And& n) {
            return eval_formula_qfree(*n.lhs, env) &&
                   eval_formula_qfree(*n.rhs, env);
          },
          [&](const Or& n) {
            return eval_formula_qfree(*n.lhs, env) ||
                   eval_formula_qfree(*n.rhs, env);
          },
          [&](const Implies& n) {
            return !eval_formula_qfree(*n.lhs, env) ||
                   eval_formula_qfree(*n.rhs, env);
          },
          [&](const QBinder& q) -> bool {
            throw ShapeError("formula is not quantifier-free: Q " + q.var);
          },
      },
      f);
}

bool eval_qf(const QF& f, const Env& env) {
  return std::visit(
      overloaded{
          [](const QFTrue&) { return true; },
          [](const QFFalse&) { return false; },
          [&](const SignAtom& a) {
            BigInt v = a.poly.eval(env);
            return a.kind == SignKind::Positive ? v > 0 : v == 0;
          },
          [&](const QFNot& n) { return !eval_qf(*n.arg, env); },
          [&](const QFAnd& n) {
            return eval_qf(*n.lhs, env) && eval_qf(*n.rhs, env);
          },
          [&](const QFOr& n) {
            return eval_qf(*n.lhs, env) || eval_qf(*n.rhs, env);
          },
      },
      f);
}

Verdict decide(const Formula& f, const ElimOptions& opts) {
  auto fv = free_vars(f);
  if (!fv.empty())
    throw ShapeError("cannot decide an open formula; free variable '" +
                     *fv.begin() + "'");
  Verdict v;
  v.method = Method::Eliminator;
  EliminationTrace trace;
  QFPtr qf = eliminate_all(f, opts, &trace);
  v.value = eval_qf(*qf, {});
  v.stable = true;
  v.trace = std::move(trace);
  return v;
}

QFPtr qf_equivalent(const Formula& f, const ElimOptions& opts) {
  return simplify(eliminate_all(f, opts));
}

// ---------------------------------------------------------------------------
// Root-bound oracle

namespace {

bool inner_eval(const Formula& f, std::optional<std::string>& qvar) {
  return std::visit(
      overloaded{
          [&](const Atom& a) {
            // A ground leaf of the Boolean combination.
            return rel_holds(eval_term(*a.lhs, {}), a.rel,
                             eval_term(*a.rhs, {}));
          },
          [&](const Not& n) { return !inner_eval(*n.arg, qvar); },
          // Both operands are evaluated so shape violations surface even in
          // branches a short-circuit would skip.
          [&](const And& n) {
            bool l = inner_eval(*n.lhs, qvar);
            bool r = inner_eval(*n.rhs, qvar);
            return l && r;
          },
          [&](const Or& n) {
            bool l = inner_eval(*n.lhs, qvar);
            bool r = inner_eval(*n.rhs, qvar);
            return l || r;
          },
          [&](const Implies& n) {
            bool l = inner_eval(*n.lhs, qvar);
            bool r = inner_eval(*n.rhs, qvar);
            return !l || r;
          },
          [&](const QBinder& q) {
            if (qvar && *qvar != q.var)
              throw ShapeError(
                  "root-bound oracle needs a single quantified variable, got "
                  "both '" +
                  *qvar + "' and '" + q.var + "'");
            qvar = q.var;
            if (contains_binder(*q.body))
              throw ShapeError("root-bound oracle cannot handle a quantifier "
                               "nested under Q " +
                               q.var);
            for (const std::string& v : free_vars(*q.body))
              if (v != q.var)
                throw ShapeError("body of Q " + q.var +
                                 " mentions another variable '" + v + "'");
            // Beyond every root of every atom polynomial the body's truth
            // value is constant, so one sample at the bound decides Q.
            Env env{{q.var, body_root_bound(*q.body)}};
            return eval_formula_qfree(*q.body, env);
          },
      },
      f);
}

}  // namespace

Verdict oracle_decide_inner(const Formula& f) {
  auto fv = free_vars(f);
  if (!fv.empty())
    throw ShapeError("cannot decide an open formula; free variable '" +
                     *fv.begin() + "'");
  std::optional<std::string> qvar;
  Verdict v;
  v.value = inner_eval(f, qvar);
  v.method = Method::CauchyOracle;
  v.stable = true;
  return v;
}

// ---------------------------------------------------------------------------
// Windowed stabilization oracle

namespace {

class WindowEval {
 public:
  explicit WindowEval(const WindowOptions& opts) : opts_(opts) {}

  bool eval(const Formula& f) {
    return std::visit(
        overloaded{
            [&](const Atom& a) {
              return rel_holds(eval_term(*a.lhs, env_), a.rel,
                               eval_term(*a.rhs, env_));
            },
            [&](const Not& n) { return !eval(*n.arg); },
            // No short-circuiting: instability in either operand must be
            // noticed regardless of the other's value.
            [&](const And& n) {
              bool l = eval(*n.lhs);
              bool r = eval(*n.rhs);
              return l && r;
            },
            [&](const Or& n) {
              bool l = eval(*n.lhs);
              bool r = eval(*n.rhs);
              return l || r;
            },
            [&](const Implies& n) {
              bool l = eval(*n.lhs);
              bool r = eval(*n.rhs);
              return !l || r;
            },
            [&](const QBinder& q) { return eval_binder(q); },
        },
        f);
  }

  bool unstable() const { return unstable_; }

 private:
  // Smallest point the binder's windows may start at. Atoms whose other
  // variables are already bound have concrete coefficients, so their root
  // bounds are computable; starting past them, the window sees the true
  // eventual values, which makes nested evaluation exact at the innermost
  // level. Atoms still mentioning unbound (more deeply nested) variables
  // contribute nothing and stay covered by the doubling schedule.
  BigInt binder_base(const QBinder& q) {
    BigInt base = opts_.base;
    std::vector<const Atom*> atoms;
    collect_atoms(*q.body, atoms);
    for (const Atom* a : atoms) {
      Polynomial p = term_to_poly(*a->lhs) - term_to_poly(*a->rhs);
      bool instantiable = true;
      for (const std::string& v : p.variables())
        if (v != q.var && !env_.count(v)) instantiable = false;
      if (!instantiable) continue;
      Polynomial inst = instantiate(p, env_);
      if (inst.is_constant()) continue;  // includes collapsing to zero
      base = std::max(base, cauchy_bound(inst));
    }
    return base;
  }

  bool window_at(const QBinder& q, const BigInt& base, bool& unanimous) {
    bool value = false;
    unanimous = true;
    for (std::uint64_t j = 0; j < opts_.window; ++j) {
      auto saved = set_var(q.var, base + j);
      bool here = eval(*q.body);
      restore_var(q.var, saved);
      if (j == 0)
        value = here;
      else if (here != value)
        unanimous = false;
    }
    return value;
  }

  bool eval_binder(const QBinder& q) {
    BigInt base0 = binder_base(q);
    // The largest windows of the doubling schedule stand in for
    // "sufficiently large": the verdict is the top window's value, stable
    // only when the two highest windows are each unanimous and agree.
    // Anchoring at the top rather than accepting the first unanimous window
    // matters for nested sentences, where the body's flip point can grow
    // with the outer variables and leave every early window unanimously
    // wrong.
    BigInt top = base0 << opts_.levels;
    bool top_unanimous = false;
    bool value = window_at(q, top, top_unanimous);
    bool confirmed = top_unanimous;
    if (opts_.levels >= 1) {
      bool prev_unanimous = false;
      bool prev =
          window_at(q, base0 << (opts_.levels - 1), prev_unanimous);
      confirmed = top_unanimous && prev_unanimous && prev == value;
    }
    if (!confirmed) {
      unstable_ = true;
      if (!top_unanimous) {
        // Mixed at the very top: best guess is the largest point sampled.
        auto saved = set_var(q.var, top + opts_.window - 1);
        value = eval(*q.body);
        restore_var(q.var, saved);
      }
    }
    return value;
  }

  std::optional<BigInt> set_var(const std::string& name, BigInt value) {
    std::optional<BigInt> old;
    if (auto it = env_.find(name); it != env_.end()) old = it->second;
    env_[name] = std::move(value);
    return old;
  }

  void restore_var(const std::string& name, const std::optional<BigInt>& old) {
    if (old)
      env_[name] = *old;
    else
      env_.erase(name);
  }

  WindowOptions opts_;
  Env env_;
  bool unstable_ = false;
};

}  // namespace

Verdict oracle_decide_window(const Formula& f, const WindowOptions& opts) {
  auto fv = free_vars(f);
  if (!fv.empty())
    throw ShapeError("cannot decide an open formula; free variable '" +
                     *fv.begin() + "'");
  if (opts.window == 0) throw ShapeError("window size must be positive");
  WindowEval ev(opts);
  Verdict v;
  v.value = ev.eval(f);
  v.method = Method::WindowOracle;
  v.stable = !ev.unstable();
  return v;
}

// ---------------------------------------------------------------------------
// Z[t]

ZtElement ZtElement::constant(BigInt v) {
  ZtElement e;
  if (v != 0) e.coeffs_.push_back(std::move(v));
  return e;
}

ZtElement ZtElement::t() {
  ZtElement e;
  e.coeffs_ = {BigInt(0), BigInt(1)};
  return e;
}

ZtElement ZtElement::from_coeffs(std::vector<BigInt> coeffs) {
  ZtElement e;
  e.coeffs_ = std::move(coeffs);
  while (!e.coeffs_.empty() && e.coeffs_.back() == 0) e.coeffs_.pop_back();
  return e;
}

ZtElement ZtElement::operator+(const ZtElement& o) const {
  std::vector<BigInt> out(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < coeffs_.size()) out[i] += coeffs_[i];
    if (i < o.coeffs_.size()) out[i] += o.coeffs_[i];
  }
  return from_coeffs(std::move(out));
}

ZtElement ZtElement::operator-(const ZtElement& o) const {
  return *this + (-o);
}

ZtElement ZtElement::operator*(const ZtElement& o) const {
  if (is_zero() || o.is_zero()) return ZtElement();
  std::vector<BigInt> out(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * o.coeffs_[j];
  return from_coeffs(std::move(out));
}

ZtElement ZtElement::operator-() const {
  ZtElement e = *this;
  for (BigInt& c : e.coeffs_) c = -c;
  return e;
}

ZtElement ZtElement::pow(std::uint64_t e) const {
  ZtElement acc = constant(1);
  ZtElement base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

int ZtElement::sign() const {
  if (coeffs_.empty()) return 0;
  return coeffs_.back() > 0 ? 1 : -1;
}

std::uint64_t ZtElement::degree() const {
  return coeffs_.empty() ? 0 : coeffs_.size() - 1;
}

BigInt ZtElement::leading_coeff() const {
  return coeffs_.empty() ? BigInt(0) : coeffs_.back();
}

std::string ZtElement::str() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const BigInt& c = coeffs_[k];
    if (c == 0) continue;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    if (k == 0 || mag != 1) out += mag.str();
    if (k >= 1) {
      if (mag != 1) out += "*";
      out += "t";
      if (k >= 2) out += "^" + std::to_string(k);
    }
  }
  return out;
}

namespace {

ZtElement zt_eval_poly(const Polynomial& p, const ZtEnv& env) {
  ZtElement acc;
  for (const auto& [mono, coeff] : p.terms()) {
    ZtElement term = ZtElement::constant(coeff);
    for (const auto& [name, exp] : mono.exponents()) {
      auto it = env.find(name);
      if (it == env.end())
        throw EvalError("no value bound for variable '" + name + "'");
      term = term * it->second.pow(exp);
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace

bool zt_eval_qf(const QF& f, const ZtEnv& env) {
  return std::visit(
      overloaded{
          [](const QFTrue&) { return true; },
          [](const QFFalse&) { return false; },
          [&](const SignAtom& a) {
            ZtElement v = zt_eval_poly(a.poly, env);
            return a.kind == SignKind::Positive ? v.sign() > 0 : v.is_zero();
          },
          [&](const QFNot& n) { return !zt_eval_qf(*n.arg, env); },
          [&](const QFAnd& n) {
            return zt_eval_qf(*n.lhs, env) && zt_eval_qf(*n.rhs, env);
          },
          [&](const QFOr& n) {
            return zt_eval_qf(*n.lhs, env) || zt_eval_qf(*n.rhs, env);
          },
      },
      f);
}

CorpusReport zt_tail_consistency(const Formula& f, const ZtSampleBounds& b) {
  auto start = std::chrono::steady_clock::now();
  const auto* q = std::get_if<QBinder>(&f);
  if (!q)
    throw ShapeError("tail consistency expects a sentence of the form "
                     "Q x. body");
  if (contains_binder(*q->body))
    throw ShapeError("tail consistency expects a quantifier-free body");
  for (const std::string& v : free_vars(*q->body))
    if (v != q->var)
      throw ShapeError("body of Q " + q->var +
                       " mentions another variable '" + v + "'");
  if (b.coeff_bound < 0) throw ShapeError("coefficient bound must be >= 0");

  bool verdict = decide(f).value;
  BigInt bound = body_root_bound(*q->body);
  QFPtr body_qf = eliminate_all(*q->body);

  // Every element of Z[t] with the given degree and coefficient bounds;
  // distinct coefficient vectors are distinct elements.
  std::vector<ZtElement> samples;
  std::vector<BigInt> cur(b.max_degree + 1);
  const auto enumerate = [&](auto&& self, std::size_t pos) -> void {
    if (pos == cur.size()) {
      samples.push_back(ZtElement::from_coeffs(cur));
      return;
    }
    for (std::int64_t c = -b.coeff_bound; c <= b.coeff_bound; ++c) {
      cur[pos] = c;
      self(self, pos + 1);
    }
  };
  enumerate(enumerate, 0);
  std::sort(samples.begin(), samples.end());

  // The sentence holds in Z[t] with t infinite exactly when the body holds
  // at every element beyond the atoms' root bounds: those of positive degree
  // with positive leading coefficient, and the integers >= the bound.
  CorpusReport rep;
  rep.seed = 0;
  for (const ZtElement& e : samples) {
    bool beyond = e.degree() >= 1 ? e.leading_coeff() > 0
                                  : e.leading_coeff() >= bound;
    if (!beyond) continue;
    bool actual = zt_eval_qf(*body_qf, {{q->var, e}});
    CorpusInstance inst;
    inst.index = rep.instance_count;
    inst.seed = 0;
    inst.sentence = q->var + " = " + e.str();
    inst.decide_value = verdict;
    inst.oracle_value = actual;
    inst.oracle_method = Method::ZtSampler;
    inst.oracle_stable = true;
    if (actual == verdict)
      ++rep.agreement_count;
    else
      rep.disagreements.push_back(inst);
    ++rep.instance_count;
  }
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rep;
}

// ---------------------------------------------------------------------------
// Deterministic corpus

namespace {

// splitmix64; fixed here so corpora are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool percent(unsigned p) { return below(100) < p; }

 private:
  std::uint64_t state_;
};

std::string level_var(unsigned depth_index) {
  static const char* names[] = {"x", "y", "z"};
  std::string base = names[(depth_index - 1) % 3];
  unsigned round = (depth_index - 1) / 3;
  return round == 0 ? base : base + std::to_string(round);
}

TermPtr gen_monomial(Rng& rng, const std::vector<std::string>& scope,
                     unsigned max_degree, bool linear) {
  std::uint64_t coeff = 1 + rng.below(9);
  unsigned degree = 0;
  if (!scope.empty()) {
    unsigned cap = linear ? 1 : max_degree;
    degree = static_cast<unsigned>(rng.below(cap + 1));
  }
  std::map<std::string, std::uint64_t> exps;
  for (unsigned i = 0; i < degree; ++i)
    ++exps[scope[rng.below(scope.size())]];
  TermPtr t;
  if (exps.empty() || coeff != 1) t = mk_num(BigInt(coeff));
  for (const auto& [name, exp] : exps) {
    TermPtr factor =
        exp == 1 ? mk_var(name) : mk_pow(mk_var(name), exp);
    t = t ? mk_mul(t, factor) : factor;
  }
  return t;
}

TermPtr gen_side(Rng& rng, const std::vector<std::string>& scope,
                 unsigned max_degree, bool linear) {
  std::uint64_t pieces = 1 + rng.below(3);
  TermPtr t = gen_monomial(rng, scope, max_degree, linear);
  for (std::uint64_t i = 1; i < pieces; ++i) {
    TermPtr m = gen_monomial(rng, scope, max_degree, linear);
    t = rng.percent(50) ? mk_add(t, m) : mk_sub(t, m);
  }
  return t;
}

FormulaPtr gen_atom(Rng& rng, const std::vector<std::string>& scope,
                    unsigned max_degree) {
  // Half the atoms stay linear so verdicts hinge on the cascade's lower
  // branches, not just leading terms.
  bool linear = rng.percent(50);
  static const Rel rels[] = {Rel::Lt, Rel::Le, Rel::Gt,
                             Rel::Ge, Rel::Eq, Rel::Ne};
  Rel rel = rels[rng.below(6)];
  return mk_atom(gen_side(rng, scope, max_degree, linear), rel,
                 gen_side(rng, scope, max_degree, linear));
}

FormulaPtr gen_qf_formula(Rng& rng, const std::vector<std::string>& scope,
                          unsigned max_degree, unsigned atom_budget) {
  if (atom_budget <= 1 || rng.percent(35))
    return gen_atom(rng, scope, max_degree);
  switch (rng.below(4)) {
    case 0: {
      unsigned left = 1 + static_cast<unsigned>(rng.below(atom_budget - 1));
      return mk_and(gen_qf_formula(rng, scope, max_degree, left),
                    gen_qf_formula(rng, scope, max_degree,
                                   atom_budget - left));
    }
    case 1: {
      unsigned left = 1 + static_cast<unsigned>(rng.below(atom_budget - 1));
      return mk_or(gen_qf_formula(rng, scope, max_degree, left),
                   gen_qf_formula(rng, scope, max_degree, atom_budget - left));
    }
    case 2:
      return mk_not(gen_qf_formula(rng, scope, max_degree, atom_budget - 1));
    default: {
      unsigned left = 1 + static_cast<unsigned>(rng.below(atom_budget - 1));
      return mk_implies(gen_qf_formula(rng, scope, max_degree, left),
                        gen_qf_formula(rng, scope, max_degree,
                                       atom_budget - left));
    }
  }
}

FormulaPtr gen_level(Rng& rng, const CorpusOptions& opts,
                     std::vector<std::string>& scope, unsigned depth) {
  if (depth == 0) {
    unsigned budget = 1 + static_cast<unsigned>(
                              rng.below(std::max(1u, opts.atoms)));
    return gen_qf_formula(rng, scope, opts.degree, budget);
  }
  std::string var = level_var(depth);
  scope.push_back(var);
  FormulaPtr body = gen_level(rng, opts, scope, depth - 1);
  scope.pop_back();
  FormulaPtr q = mk_qbinder(var, body);
  // Occasionally a side condition over the outer scope, so binders appear
  // under Boolean structure and not only at the root.
  if (rng.percent(20)) {
    FormulaPtr side = gen_atom(rng, scope, opts.degree);
    q = rng.percent(50) ? mk_and(side, q) : mk_or(side, q);
  }
  return q;
}

}  // namespace

std::uint64_t corpus_instance_seed(std::uint64_t corpus_seed,
                                   std::uint64_t index) {
  Rng rng(corpus_seed ^ (index + 1) * 0x9e3779b97f4a7c15ULL);
  return rng.next();
}

FormulaPtr corpus_sentence(std::uint64_t instance_seed,
                           const CorpusOptions& opts) {
  Rng rng(instance_seed);
  unsigned lo = std::max(1u, opts.min_depth);
  unsigned hi = std::max(lo, opts.max_depth);
  unsigned depth = lo + static_cast<unsigned>(rng.below(hi - lo + 1));
  std::vector<std::string> scope;
  FormulaPtr f = gen_level(rng, opts, scope, depth);
  // For single-binder corpora, sometimes join two sentences so the oracle
  // sees Q under both conjunction and disjunction.
  if (depth == 1 && rng.percent(15)) {
    FormulaPtr g = gen_level(rng, opts, scope, 1);
    f = rng.percent(50) ? mk_and(f, g) : mk_or(f, g);
  }
  return f;
}

CorpusReport cross_check(const CorpusOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  CorpusReport rep;
  rep.seed = opts.seed;
  for (std::uint64_t i = 0; i < opts.count; ++i) {
    std::uint64_t iseed = corpus_instance_seed(opts.seed, i);
    FormulaPtr f = corpus_sentence(iseed, opts);

    CorpusInstance inst;
    inst.index = i;
    inst.seed = iseed;
    inst.sentence = print_formula(*f);
    inst.decide_value = decide(*f, opts.elim).value;

    if (q_depth(*f) <= 1) {
      Verdict oracle = oracle_decide_inner(*f);
      inst.oracle_value = oracle.value;
      inst.oracle_method = Method::CauchyOracle;
      inst.oracle_stable = true;
      if (oracle.value == inst.decide_value)
        ++rep.agreement_count;
      else
        rep.disagreements.push_back(inst);
    } else {
      Verdict oracle = oracle_decide_window(*f, opts.window);
      inst.oracle_value = oracle.value;
      inst.oracle_method = Method::WindowOracle;
      inst.oracle_stable = oracle.stable;
      if (!oracle.stable)
        rep.unstable.push_back(inst);
      else if (oracle.value == inst.decide_value)
        ++rep.agreement_count;
      else
        rep.disagreements.push_back(inst);
    }
    ++rep.instance_count;
  }
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rep;
}

}  // namespace aaq
