#include "aaq/poly.hpp"

#include <algorithm>
#include <cassert>

namespace aaq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kCountCap = 1'000'000'000'000ULL;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s < a || s > kCountCap) return kCountCap;
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(const std::string& name, std::uint64_t exp) {
  Monomial m;
  if (exp > 0) m.exps_[name] = exp;
  return m;
}

Monomial Monomial::times(const Monomial& other) const {
  Monomial out = *this;
  for (const auto& [v, e] : other.exps_) out.exps_[v] += e;
  return out;
}

Monomial Monomial::without(const std::string& name) const {
  Monomial out = *this;
  out.exps_.erase(name);
  return out;
}

std::uint64_t Monomial::exponent_of(const std::string& name) const {
  auto it = exps_.find(name);
  return it == exps_.end() ? 0 : it->second;
}

std::uint64_t Monomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [v, e] : exps_) d += e;
  return d;
}

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  std::uint64_t da = a.total_degree(), db = b.total_degree();
  if (da != db) return da > db;
  // Lexicographic: first alphabetical variable with differing exponent wins
  // with the larger exponent.
  auto ia = a.exponents().begin(), ea = a.exponents().end();
  auto ib = b.exponents().begin(), eb = b.exponents().end();
  while (ia != ea && ib != eb) {
    if (ia->first != ib->first) {
      // The alphabetically earlier variable is present in only one monomial;
      // that monomial has the higher lex rank.
      return ia->first < ib->first;
    }
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  return ia != ea;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(BigInt c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(Monomial{}, std::move(c));
  return p;
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.terms_.emplace(Monomial::variable(name), BigInt(1));
  return p;
}

void Polynomial::add_term(const Monomial& m, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_)
      out.add_term(ma.times(mb), ca * cb);
  return out;
}

Polynomial Polynomial::pow(std::uint64_t e) const {
  Polynomial result = Polynomial::constant(1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

BigInt Polynomial::constant_value() const {
  assert(is_constant());
  return terms_.empty() ? BigInt(0) : terms_.begin()->second;
}

BigInt Polynomial::leading_coeff() const {
  return terms_.empty() ? BigInt(0) : terms_.begin()->second;
}

std::uint64_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

std::uint64_t Polynomial::degree_in(const std::string& name) const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent_of(name));
  return d;
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.exponents()) out.insert(v);
  return out;
}

BigInt Polynomial::eval(const std::map<std::string, BigInt>& env) const {
  BigInt total = 0;
  for (const auto& [m, c] : terms_) {
    BigInt v = c;
    for (const auto& [name, exp] : m.exponents()) {
      auto it = env.find(name);
      if (it == env.end())
        throw EvalError("no value bound for variable '" + name + "'");
      BigInt base = it->second, acc = 1;
      for (std::uint64_t e = exp; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
      }
      v *= acc;
    }
    total += v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Term conversion, coefficient extraction, root bound

Polynomial term_to_poly(const Term& t) {
  return std::visit(
      overloaded{
          [](const Var& v) { return Polynomial::variable(v.name); },
          [](const Numeral& n) { return Polynomial::constant(n.value); },
          [](const Add& a) { return term_to_poly(*a.lhs) + term_to_poly(*a.rhs); },
          [](const Sub& s) { return term_to_poly(*s.lhs) - term_to_poly(*s.rhs); },
          [](const Mul& m) { return term_to_poly(*m.lhs) * term_to_poly(*m.rhs); },
          [](const Pow& p) { return term_to_poly(*p.base).pow(p.exponent); },
      },
      static_cast<const Term::variant&>(t));
}

std::vector<Polynomial> coeffs_in(const Polynomial& p, const std::string& x) {
  std::uint64_t d = p.degree_in(x);
  std::vector<Polynomial> out(d + 1);  // out[i] holds c_{d-i}
  for (const auto& [m, c] : p.terms()) {
    std::uint64_t k = m.exponent_of(x);
    Polynomial piece = Polynomial::constant(c);
    Monomial rest = m.without(x);  // keep alive across the loop
    for (const auto& [v, e] : rest.exponents())
      piece = piece * Polynomial::variable(v).pow(e);
    out[d - k] = out[d - k] + piece;
  }
  return out;
}

BigInt cauchy_bound(const Polynomial& p) {
  if (p.is_zero()) throw EvalError("cauchy_bound: zero polynomial");
  auto vars = p.variables();
  if (vars.size() > 1)
    throw EvalError("cauchy_bound: polynomial is not univariate");
  if (vars.empty()) return 1;  // constant sign everywhere
  std::vector<Polynomial> cs = coeffs_in(p, *vars.begin());
  BigInt lead = abs(cs.front().constant_value());
  BigInt best = 0;
  for (std::size_t i = 1; i < cs.size(); ++i) {
    BigInt c = abs(cs[i].constant_value());
    BigInt q = (c + lead - 1) / lead;  // ceil(|c_i| / |c_d|)
    best = std::max(best, q);
  }
  return best + 1;
}

// ---------------------------------------------------------------------------
// Sign atoms

SignAtom make_sign_atom(Polynomial p, SignKind kind) {
  if (kind == SignKind::Zero && p.leading_coeff() < 0) p = -p;
  return SignAtom{std::move(p), kind};
}

bool ground_sign_atom_truth(const SignAtom& a) {
  assert(a.poly.is_constant());
  BigInt v = a.poly.constant_value();
  return a.kind == SignKind::Positive ? v > 0 : v == 0;
}

QFPtr atom_to_sign_literal(const Term& lhs, Rel rel, const Term& rhs) {
  Polynomial pl = term_to_poly(lhs), pr = term_to_poly(rhs);
  switch (rel) {
    case Rel::Lt:
      return qf_atom(make_sign_atom(pr - pl, SignKind::Positive));
    case Rel::Eq:
      return qf_atom(make_sign_atom(pl - pr, SignKind::Zero));
    default:
      throw Error("atom_to_sign_literal: relation is not core (< or =)");
  }
}

// ---------------------------------------------------------------------------
// QF formulas

QFPtr qf_true() {
  static const QFPtr t = std::make_shared<QF>(QFTrue{});
  return t;
}
QFPtr qf_false() {
  static const QFPtr f = std::make_shared<QF>(QFFalse{});
  return f;
}
QFPtr qf_atom(SignAtom a) { return std::make_shared<QF>(std::move(a)); }
QFPtr qf_not(QFPtr arg) { return std::make_shared<QF>(QFNot{std::move(arg)}); }
QFPtr qf_and(QFPtr lhs, QFPtr rhs) {
  return std::make_shared<QF>(QFAnd{std::move(lhs), std::move(rhs)});
}
QFPtr qf_or(QFPtr lhs, QFPtr rhs) {
  return std::make_shared<QF>(QFOr{std::move(lhs), std::move(rhs)});
}

QFPtr qf_atom_folded(SignAtom a) {
  if (a.poly.is_constant())
    return ground_sign_atom_truth(a) ? qf_true() : qf_false();
  return qf_atom(std::move(a));
}

QFPtr qf_not_folded(QFPtr arg) {
  if (std::holds_alternative<QFTrue>(*arg)) return qf_false();
  if (std::holds_alternative<QFFalse>(*arg)) return qf_true();
  return qf_not(std::move(arg));
}

QFPtr qf_and_folded(QFPtr lhs, QFPtr rhs) {
  if (std::holds_alternative<QFFalse>(*lhs) ||
      std::holds_alternative<QFFalse>(*rhs))
    return qf_false();
  if (std::holds_alternative<QFTrue>(*lhs)) return rhs;
  if (std::holds_alternative<QFTrue>(*rhs)) return lhs;
  return qf_and(std::move(lhs), std::move(rhs));
}

QFPtr qf_or_folded(QFPtr lhs, QFPtr rhs) {
  if (std::holds_alternative<QFTrue>(*lhs) ||
      std::holds_alternative<QFTrue>(*rhs))
    return qf_true();
  if (std::holds_alternative<QFFalse>(*lhs)) return rhs;
  if (std::holds_alternative<QFFalse>(*rhs)) return lhs;
  return qf_or(std::move(lhs), std::move(rhs));
}

bool qf_equal(const QF& a, const QF& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const QFTrue&) { return true; },
          [&](const QFFalse&) { return true; },
          [&](const SignAtom& x) { return x == std::get<SignAtom>(b); },
          [&](const QFNot& x) { return qf_equal(*x.arg, *std::get<QFNot>(b).arg); },
          [&](const QFAnd& x) {
            const auto& y = std::get<QFAnd>(b);
            return qf_equal(*x.lhs, *y.lhs) && qf_equal(*x.rhs, *y.rhs);
          },
          [&](const QFOr& x) {
            const auto& y = std::get<QFOr>(b);
            return qf_equal(*x.lhs, *y.lhs) && qf_equal(*x.rhs, *y.rhs);
          },
      },
      static_cast<const QF::variant&>(a));
}

namespace {

struct Counts {
  std::uint64_t nodes;
  std::uint64_t atoms;
};

// Logical counts with subtree sharing expanded; memoized per pointer so the
// walk is linear in the dag size.
Counts count_qf(const QF* f, std::map<const QF*, Counts>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  Counts c = std::visit(
      overloaded{
          [&](const QFTrue&) { return Counts{1, 0}; },
          [&](const QFFalse&) { return Counts{1, 0}; },
          [&](const SignAtom&) { return Counts{1, 1}; },
          [&](const QFNot& x) {
            Counts a = count_qf(x.arg.get(), memo);
            return Counts{sat_add(1, a.nodes), a.atoms};
          },
          [&](const QFAnd& x) {
            Counts a = count_qf(x.lhs.get(), memo);
            Counts b = count_qf(x.rhs.get(), memo);
            return Counts{sat_add(1, sat_add(a.nodes, b.nodes)),
                          sat_add(a.atoms, b.atoms)};
          },
          [&](const QFOr& x) {
            Counts a = count_qf(x.lhs.get(), memo);
            Counts b = count_qf(x.rhs.get(), memo);
            return Counts{sat_add(1, sat_add(a.nodes, b.nodes)),
                          sat_add(a.atoms, b.atoms)};
          },
      },
      static_cast<const QF::variant&>(*f));
  memo.emplace(f, c);
  return c;
}

}  // namespace

std::uint64_t qf_node_count(const QF& f) {
  std::map<const QF*, Counts> memo;
  return count_qf(&f, memo).nodes;
}

std::uint64_t qf_atom_count(const QF& f) {
  std::map<const QF*, Counts> memo;
  return count_qf(&f, memo).atoms;
}

std::set<std::string> free_vars(const QF& f) {
  std::set<std::string> out;
  std::visit(
      overloaded{
          [&](const QFTrue&) {},
          [&](const QFFalse&) {},
          [&](const SignAtom& a) { out = a.poly.variables(); },
          [&](const QFNot& x) { out = free_vars(*x.arg); },
          [&](const QFAnd& x) {
            out = free_vars(*x.lhs);
            auto r = free_vars(*x.rhs);
            out.insert(r.begin(), r.end());
          },
          [&](const QFOr& x) {
            out = free_vars(*x.lhs);
            auto r = free_vars(*x.rhs);
            out.insert(r.begin(), r.end());
          },
      },
      static_cast<const QF::variant&>(f));
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// One side of a printed atom: sum of monomials with positive coefficients.
TermPtr monomials_to_term(const std::vector<std::pair<Monomial, BigInt>>& ms) {
  if (ms.empty()) return mk_num(0);
  TermPtr acc;
  for (const auto& [m, c] : ms) {
    TermPtr t;
    for (const auto& [v, e] : m.exponents()) {
      TermPtr f = e == 1 ? mk_var(v) : mk_pow(mk_var(v), e);
      t = t ? mk_mul(std::move(t), std::move(f)) : std::move(f);
    }
    if (!t) {
      t = mk_num(c);
    } else if (c != 1) {
      t = mk_mul(mk_num(c), std::move(t));
    }
    acc = acc ? mk_add(std::move(acc), std::move(t)) : std::move(t);
  }
  return acc;
}

// p rendered as "pos REL neg" so both sides carry non-negative coefficients.
FormulaPtr sign_atom_to_formula(const SignAtom& a) {
  std::vector<std::pair<Monomial, BigInt>> pos, neg;
  for (const auto& [m, c] : a.poly.terms()) {
    if (c > 0)
      pos.emplace_back(m, c);
    else
      neg.emplace_back(m, -c);
  }
  TermPtr lhs = monomials_to_term(pos);
  TermPtr rhs = monomials_to_term(neg);
  return mk_atom(std::move(lhs),
                 a.kind == SignKind::Positive ? Rel::Gt : Rel::Eq,
                 std::move(rhs));
}

}  // namespace

FormulaPtr qf_to_formula(const QF& f) {
  return std::visit(
      overloaded{
          [&](const QFTrue&) { return mk_atom(mk_num(0), Rel::Eq, mk_num(0)); },
          [&](const QFFalse&) { return mk_atom(mk_num(0), Rel::Ne, mk_num(0)); },
          [&](const SignAtom& a) { return sign_atom_to_formula(a); },
          [&](const QFNot& x) { return mk_not(qf_to_formula(*x.arg)); },
          [&](const QFAnd& x) {
            return mk_and(qf_to_formula(*x.lhs), qf_to_formula(*x.rhs));
          },
          [&](const QFOr& x) {
            return mk_or(qf_to_formula(*x.lhs), qf_to_formula(*x.rhs));
          },
      },
      static_cast<const QF::variant&>(f));
}

std::string print_qf(const QF& f, PrintFormat format) {
  return print_formula(*qf_to_formula(f), format);
}

}  // namespace aaq
