#include "aaq/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <limits>
#include <vector>

namespace aaq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

TermPtr mk_var(std::string name) {
  return std::make_shared<Term>(Var{std::move(name)});
}
TermPtr mk_num(BigInt value) {
  assert(value >= 0);
  return std::make_shared<Term>(Numeral{std::move(value)});
}
TermPtr mk_add(TermPtr lhs, TermPtr rhs) {
  return std::make_shared<Term>(Add{std::move(lhs), std::move(rhs)});
}
TermPtr mk_sub(TermPtr lhs, TermPtr rhs) {
  return std::make_shared<Term>(Sub{std::move(lhs), std::move(rhs)});
}
TermPtr mk_mul(TermPtr lhs, TermPtr rhs) {
  return std::make_shared<Term>(Mul{std::move(lhs), std::move(rhs)});
}
TermPtr mk_pow(TermPtr base, std::uint64_t exponent) {
  return std::make_shared<Term>(Pow{std::move(base), exponent});
}

FormulaPtr mk_atom(TermPtr lhs, Rel rel, TermPtr rhs) {
  return std::make_shared<Formula>(Atom{std::move(lhs), rel, std::move(rhs)});
}
FormulaPtr mk_not(FormulaPtr arg) {
  return std::make_shared<Formula>(Not{std::move(arg)});
}
FormulaPtr mk_and(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(And{std::move(lhs), std::move(rhs)});
}
FormulaPtr mk_or(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Or{std::move(lhs), std::move(rhs)});
}
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Implies{std::move(lhs), std::move(rhs)});
}
FormulaPtr mk_qbinder(std::string var, FormulaPtr body) {
  return std::make_shared<Formula>(QBinder{std::move(var), std::move(body)});
}

// ---------------------------------------------------------------------------
// Structural equality

bool term_equal(const Term& a, const Term& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const Var& x) { return x.name == std::get<Var>(b).name; },
          [&](const Numeral& x) { return x.value == std::get<Numeral>(b).value; },
          [&](const Add& x) {
            const auto& y = std::get<Add>(b);
            return term_equal(*x.lhs, *y.lhs) && term_equal(*x.rhs, *y.rhs);
          },
          [&](const Sub& x) {
            const auto& y = std::get<Sub>(b);
            return term_equal(*x.lhs, *y.lhs) && term_equal(*x.rhs, *y.rhs);
          },
          [&](const Mul& x) {
            const auto& y = std::get<Mul>(b);
            return term_equal(*x.lhs, *y.lhs) && term_equal(*x.rhs, *y.rhs);
          },
          [&](const Pow& x) {
            const auto& y = std::get<Pow>(b);
            return x.exponent == y.exponent && term_equal(*x.base, *y.base);
          },
      },
      static_cast<const Term::variant&>(a));
}

bool formula_equal(const Formula& a, const Formula& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const Atom& x) {
            const auto& y = std::get<Atom>(b);
            return x.rel == y.rel && term_equal(*x.lhs, *y.lhs) &&
                   term_equal(*x.rhs, *y.rhs);
          },
          [&](const Not& x) {
            return formula_equal(*x.arg, *std::get<Not>(b).arg);
          },
          [&](const And& x) {
            const auto& y = std::get<And>(b);
            return formula_equal(*x.lhs, *y.lhs) && formula_equal(*x.rhs, *y.rhs);
          },
          [&](const Or& x) {
            const auto& y = std::get<Or>(b);
            return formula_equal(*x.lhs, *y.lhs) && formula_equal(*x.rhs, *y.rhs);
          },
          [&](const Implies& x) {
            const auto& y = std::get<Implies>(b);
            return formula_equal(*x.lhs, *y.lhs) && formula_equal(*x.rhs, *y.rhs);
          },
          [&](const QBinder& x) {
            const auto& y = std::get<QBinder>(b);
            return x.var == y.var && formula_equal(*x.body, *y.body);
          },
      },
      static_cast<const Formula::variant&>(a));
}

// ---------------------------------------------------------------------------
// Node counting

std::size_t node_count(const Term& t) {
  return std::visit(
      overloaded{
          [](const Var&) -> std::size_t { return 1; },
          [](const Numeral&) -> std::size_t { return 1; },
          [](const Add& x) { return 1 + node_count(*x.lhs) + node_count(*x.rhs); },
          [](const Sub& x) { return 1 + node_count(*x.lhs) + node_count(*x.rhs); },
          [](const Mul& x) { return 1 + node_count(*x.lhs) + node_count(*x.rhs); },
          [](const Pow& x) { return 1 + node_count(*x.base); },
      },
      static_cast<const Term::variant&>(t));
}

std::size_t node_count(const Formula& f) {
  return std::visit(
      overloaded{
          [](const Atom& x) {
            return 1 + node_count(*x.lhs) + node_count(*x.rhs);
          },
          [](const Not& x) { return 1 + node_count(*x.arg); },
          [](const And& x) { return 1 + node_count(*x.lhs) + node_count(*x.rhs); },
          [](const Or& x) { return 1 + node_count(*x.lhs) + node_count(*x.rhs); },
          [](const Implies& x) {
            return 1 + node_count(*x.lhs) + node_count(*x.rhs);
          },
          [](const QBinder& x) { return 1 + node_count(*x.body); },
      },
      static_cast<const Formula::variant&>(f));
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident,
  Numeral,
  KwQ,
  Dot,
  LParen,
  RParen,
  Plus,
  Minus,
  Star,
  Caret,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  AndAnd,
  OrOr,
  Bang,
  Arrow,
  End,
};

struct Token {
  Tok kind;
  std::string_view text;
  SourceSpan span;
};

[[noreturn]] void syntax_error(std::string msg, SourceSpan span) {
  throw ParseError(ParseError::Kind::Syntax, std::move(msg), span);
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto push = [&](Tok k, std::size_t start, std::size_t end) {
    out.push_back(Token{k, text.substr(start, end - start), {start, end}});
  };
  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t s = i;
    if (c >= '0' && c <= '9') {
      while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
      push(Tok::Numeral, s, i);
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      ++i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                       text[i] == '_'))
        ++i;
      push(Tok::Ident, s, i);
      continue;
    }
    if (c == 'Q') {
      push(Tok::KwQ, s, ++i);
      continue;
    }
    auto two = [&](char next) { return i + 1 < n && text[i + 1] == next; };
    switch (c) {
      case '.': push(Tok::Dot, s, ++i); break;
      case '(': push(Tok::LParen, s, ++i); break;
      case ')': push(Tok::RParen, s, ++i); break;
      case '+': push(Tok::Plus, s, ++i); break;
      case '*': push(Tok::Star, s, ++i); break;
      case '^': push(Tok::Caret, s, ++i); break;
      case '=': push(Tok::Eq, s, ++i); break;
      case '-':
        if (two('>')) {
          i += 2;
          push(Tok::Arrow, s, i);
        } else {
          push(Tok::Minus, s, ++i);
        }
        break;
      case '<':
        if (two('=')) {
          i += 2;
          push(Tok::Le, s, i);
        } else {
          push(Tok::Lt, s, ++i);
        }
        break;
      case '>':
        if (two('=')) {
          i += 2;
          push(Tok::Ge, s, i);
        } else {
          push(Tok::Gt, s, ++i);
        }
        break;
      case '!':
        if (two('=')) {
          i += 2;
          push(Tok::Ne, s, i);
        } else {
          push(Tok::Bang, s, ++i);
        }
        break;
      case '&':
        if (two('&')) {
          i += 2;
          push(Tok::AndAnd, s, i);
        } else {
          syntax_error("unexpected character '&' (did you mean '&&'?)", {s, s + 1});
        }
        break;
      case '|':
        if (two('|')) {
          i += 2;
          push(Tok::OrOr, s, i);
        } else {
          syntax_error("unexpected character '|' (did you mean '||'?)", {s, s + 1});
        }
        break;
      default:
        syntax_error(std::string("unexpected character '") + c + "'", {s, s + 1});
    }
  }
  out.push_back(Token{Tok::End, {}, {n, n}});
  return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser

class Parser {
 public:
  Parser(std::string_view text, std::size_t node_limit)
      : tokens_(lex(text)), node_limit_(node_limit) {}

  FormulaPtr parse() {
    FormulaPtr f = formula();
    expect(Tok::End, "expected end of input");
    return f;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t nodes_ = 0;
  std::size_t node_limit_;
  std::vector<std::string> scope_;

  const Token& peek() const { return tokens_[pos_]; }
  Token advance() { return tokens_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) syntax_error(what, peek().span);
    return advance();
  }

  void count(std::size_t n = 1) {
    nodes_ += n;
    if (nodes_ > node_limit_) {
      throw ParseError(ParseError::Kind::SizeLimit,
                       "formula exceeds node limit of " +
                           std::to_string(node_limit_),
                       peek().span);
    }
  }

  FormulaPtr formula() {
    if (accept(Tok::KwQ)) {
      Token id = expect(Tok::Ident, "expected variable name after 'Q'");
      std::string name(id.text);
      if (std::find(scope_.begin(), scope_.end(), name) != scope_.end()) {
        throw ParseError(ParseError::Kind::DuplicateBinding,
                         "variable '" + name + "' is already bound in scope",
                         id.span);
      }
      expect(Tok::Dot, "expected '.' after quantified variable");
      scope_.push_back(name);
      FormulaPtr body = formula();
      scope_.pop_back();
      count();
      return mk_qbinder(std::move(name), std::move(body));
    }
    FormulaPtr lhs = disj();
    if (accept(Tok::Arrow)) {
      FormulaPtr rhs = formula();  // right-associative, may start with Q
      count();
      return mk_implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    while (accept(Tok::OrOr)) {
      FormulaPtr rhs = conj();
      count();
      f = mk_or(std::move(f), std::move(rhs));
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = neg();
    while (accept(Tok::AndAnd)) {
      FormulaPtr rhs = neg();
      count();
      f = mk_and(std::move(f), std::move(rhs));
    }
    return f;
  }

  FormulaPtr neg() {
    if (accept(Tok::Bang)) {
      FormulaPtr arg = neg();
      count();
      return mk_not(std::move(arg));
    }
    if (at(Tok::LParen)) {
      // '(' may open a parenthesized formula or the leading term of an atom,
      // e.g. "(x < 1) && ..." versus "(x + 1) < 2". Try both; on double
      // failure report the error that got furthest.
      std::size_t save_pos = pos_;
      std::size_t save_nodes = nodes_;
      try {
        advance();
        FormulaPtr f = formula();
        expect(Tok::RParen, "expected ')'");
        return f;
      } catch (const ParseError& formula_err) {
        if (formula_err.kind != ParseError::Kind::Syntax) throw;
        std::size_t formula_end = formula_err.span.start;
        pos_ = save_pos;
        nodes_ = save_nodes;
        try {
          return atom();
        } catch (const ParseError& atom_err) {
          if (atom_err.kind != ParseError::Kind::Syntax) throw;
          if (formula_end > atom_err.span.start) throw formula_err;
          throw;
        }
      }
    }
    return atom();
  }

  FormulaPtr atom() {
    TermPtr lhs = term();
    Rel rel;
    switch (peek().kind) {
      case Tok::Lt: rel = Rel::Lt; break;
      case Tok::Le: rel = Rel::Le; break;
      case Tok::Gt: rel = Rel::Gt; break;
      case Tok::Ge: rel = Rel::Ge; break;
      case Tok::Eq: rel = Rel::Eq; break;
      case Tok::Ne: rel = Rel::Ne; break;
      default:
        syntax_error("expected relation (<, <=, >, >=, =, !=)", peek().span);
    }
    advance();
    TermPtr rhs = term();
    count();
    return mk_atom(std::move(lhs), rel, std::move(rhs));
  }

  TermPtr term() {
    TermPtr t = factor();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      bool plus = advance().kind == Tok::Plus;
      TermPtr rhs = factor();
      count();
      t = plus ? mk_add(std::move(t), std::move(rhs))
               : mk_sub(std::move(t), std::move(rhs));
    }
    return t;
  }

  TermPtr factor() {
    TermPtr t = power();
    while (accept(Tok::Star)) {
      TermPtr rhs = power();
      count();
      t = mk_mul(std::move(t), std::move(rhs));
    }
    return t;
  }

  TermPtr power() {
    TermPtr b = base();
    if (accept(Tok::Caret)) {
      if (!at(Tok::Numeral)) {
        throw ParseError(ParseError::Kind::ExponentNotLiteral,
                         "exponent must be a numeral literal", peek().span);
      }
      Token num = advance();
      BigInt e(std::string(num.text));
      if (e > std::numeric_limits<std::uint64_t>::max()) {
        throw ParseError(ParseError::Kind::SizeLimit, "exponent too large",
                         num.span);
      }
      count();
      return mk_pow(std::move(b), e.convert_to<std::uint64_t>());
    }
    return b;
  }

  TermPtr base() {
    if (at(Tok::Ident)) {
      Token id = advance();
      count();
      return mk_var(std::string(id.text));
    }
    if (at(Tok::Numeral)) {
      Token num = advance();
      count();
      return mk_num(BigInt(std::string(num.text)));
    }
    if (accept(Tok::LParen)) {
      TermPtr t = term();
      expect(Tok::RParen, "expected ')'");
      return t;
    }
    syntax_error("expected identifier, numeral or '('", peek().span);
  }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, std::size_t node_limit) {
  return Parser(text, node_limit).parse();
}

// ---------------------------------------------------------------------------
// Printing
//
// Text output uses minimal parentheses except that relational atoms are
// parenthesized under a connective, which keeps mixed output easy to read.
// Both forms re-parse to a structurally identical tree.

namespace {

// Binding strength: 0 formula (Q, ->), 1 disj, 2 conj, 3 neg.
void print_formula_text(const Formula& f, int level, std::string& out);

// Term levels: 0 sum, 1 product, 2 power, 3 power-base.
void print_term_text(const Term& t, int level, std::string& out) {
  std::visit(
      overloaded{
          [&](const Var& v) { out += v.name; },
          [&](const Numeral& n) { out += n.value.str(); },
          [&](const Add& a) {
            bool paren = level > 0;
            if (paren) out += '(';
            print_term_text(*a.lhs, 0, out);
            out += " + ";
            print_term_text(*a.rhs, 1, out);  // a - (b + c) keeps its parens
            if (paren) out += ')';
          },
          [&](const Sub& s) {
            bool paren = level > 0;
            if (paren) out += '(';
            print_term_text(*s.lhs, 0, out);
            out += " - ";
            print_term_text(*s.rhs, 1, out);
            if (paren) out += ')';
          },
          [&](const Mul& m) {
            bool paren = level > 1;
            if (paren) out += '(';
            print_term_text(*m.lhs, 1, out);
            out += '*';
            print_term_text(*m.rhs, 2, out);
            if (paren) out += ')';
          },
          [&](const Pow& p) {
            bool paren = level > 2;
            if (paren) out += '(';
            print_term_text(*p.base, 3, out);
            out += '^';
            out += std::to_string(p.exponent);
            if (paren) out += ')';
          },
      },
      static_cast<const Term::variant&>(t));
}

const char* rel_text(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
  }
  return "?";
}

void print_formula_text(const Formula& f, int level, std::string& out) {
  std::visit(
      overloaded{
          [&](const Atom& a) {
            bool paren = level > 0;
            if (paren) out += '(';
            print_term_text(*a.lhs, 0, out);
            out += ' ';
            out += rel_text(a.rel);
            out += ' ';
            print_term_text(*a.rhs, 0, out);
            if (paren) out += ')';
          },
          [&](const Not& n) {
            out += '!';
            print_formula_text(*n.arg, 3, out);
          },
          [&](const And& a) {
            bool paren = level > 2;
            if (paren) out += '(';
            print_formula_text(*a.lhs, 2, out);
            out += " && ";
            print_formula_text(*a.rhs, 3, out);
            if (paren) out += ')';
          },
          [&](const Or& o) {
            bool paren = level > 1;
            if (paren) out += '(';
            print_formula_text(*o.lhs, 1, out);
            out += " || ";
            print_formula_text(*o.rhs, 2, out);
            if (paren) out += ')';
          },
          [&](const Implies& i) {
            bool paren = level > 0;
            if (paren) out += '(';
            print_formula_text(*i.lhs, 1, out);
            out += " -> ";
            print_formula_text(*i.rhs, 0, out);
            if (paren) out += ')';
          },
          [&](const QBinder& q) {
            bool paren = level > 0;
            if (paren) out += '(';
            out += "Q ";
            out += q.var;
            out += ". ";
            print_formula_text(*q.body, 0, out);
            if (paren) out += ')';
          },
      },
      static_cast<const Formula::variant&>(f));
}

void print_term_sexpr(const Term& t, std::string& out) {
  std::visit(
      overloaded{
          [&](const Var& v) { out += v.name; },
          [&](const Numeral& n) { out += n.value.str(); },
          [&](const Add& a) {
            out += "(+ ";
            print_term_sexpr(*a.lhs, out);
            out += ' ';
            print_term_sexpr(*a.rhs, out);
            out += ')';
          },
          [&](const Sub& s) {
            out += "(- ";
            print_term_sexpr(*s.lhs, out);
            out += ' ';
            print_term_sexpr(*s.rhs, out);
            out += ')';
          },
          [&](const Mul& m) {
            out += "(* ";
            print_term_sexpr(*m.lhs, out);
            out += ' ';
            print_term_sexpr(*m.rhs, out);
            out += ')';
          },
          [&](const Pow& p) {
            out += "(^ ";
            print_term_sexpr(*p.base, out);
            out += ' ';
            out += std::to_string(p.exponent);
            out += ')';
          },
      },
      static_cast<const Term::variant&>(t));
}

void print_formula_sexpr(const Formula& f, std::string& out) {
  std::visit(
      overloaded{
          [&](const Atom& a) {
            out += '(';
            out += rel_text(a.rel);
            out += ' ';
            print_term_sexpr(*a.lhs, out);
            out += ' ';
            print_term_sexpr(*a.rhs, out);
            out += ')';
          },
          [&](const Not& n) {
            out += "(! ";
            print_formula_sexpr(*n.arg, out);
            out += ')';
          },
          [&](const And& a) {
            out += "(&& ";
            print_formula_sexpr(*a.lhs, out);
            out += ' ';
            print_formula_sexpr(*a.rhs, out);
            out += ')';
          },
          [&](const Or& o) {
            out += "(|| ";
            print_formula_sexpr(*o.lhs, out);
            out += ' ';
            print_formula_sexpr(*o.rhs, out);
            out += ')';
          },
          [&](const Implies& i) {
            out += "(-> ";
            print_formula_sexpr(*i.lhs, out);
            out += ' ';
            print_formula_sexpr(*i.rhs, out);
            out += ')';
          },
          [&](const QBinder& q) {
            out += "(Q ";
            out += q.var;
            out += ' ';
            print_formula_sexpr(*q.body, out);
            out += ')';
          },
      },
      static_cast<const Formula::variant&>(f));
}

}  // namespace

std::string print_term(const Term& t, PrintFormat format) {
  std::string out;
  if (format == PrintFormat::Text) {
    print_term_text(t, 0, out);
  } else {
    print_term_sexpr(t, out);
  }
  return out;
}

std::string print_formula(const Formula& f, PrintFormat format) {
  std::string out;
  if (format == PrintFormat::Text) {
    print_formula_text(f, 0, out);
  } else {
    print_formula_sexpr(f, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// S-expression parser

namespace {

struct SexprToken {
  enum class Kind { LParen, RParen, Word, End } kind;
  std::string_view text;
  SourceSpan span;
};

class SexprParser {
 public:
  SexprParser(std::string_view text, std::size_t node_limit)
      : node_limit_(node_limit) {
    lex(text);
  }

  FormulaPtr parse() {
    FormulaPtr f = formula();
    if (!at_end()) syntax_error("expected end of input", peek().span);
    return f;
  }

 private:
  std::vector<SexprToken> tokens_;
  std::size_t pos_ = 0;
  std::size_t nodes_ = 0;
  std::size_t node_limit_;
  std::vector<std::string> scope_;

  void lex(std::string_view text) {
    std::size_t i = 0, n = text.size();
    while (i < n) {
      char c = text[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
        continue;
      }
      std::size_t s = i;
      if (c == '(') {
        tokens_.push_back({SexprToken::Kind::LParen, text.substr(s, 1), {s, ++i}});
      } else if (c == ')') {
        tokens_.push_back({SexprToken::Kind::RParen, text.substr(s, 1), {s, ++i}});
      } else {
        while (i < n && text[i] != '(' && text[i] != ')' && text[i] != ' ' &&
               text[i] != '\t' && text[i] != '\n' && text[i] != '\r')
          ++i;
        tokens_.push_back({SexprToken::Kind::Word, text.substr(s, i - s), {s, i}});
      }
    }
    tokens_.push_back({SexprToken::Kind::End, {}, {n, n}});
  }

  const SexprToken& peek() const { return tokens_[pos_]; }
  SexprToken advance() { return tokens_[pos_++]; }
  bool at_end() const { return peek().kind == SexprToken::Kind::End; }

  void count() {
    if (++nodes_ > node_limit_) {
      throw ParseError(ParseError::Kind::SizeLimit,
                       "formula exceeds node limit of " +
                           std::to_string(node_limit_),
                       peek().span);
    }
  }

  SexprToken expect_word() {
    if (peek().kind != SexprToken::Kind::Word)
      syntax_error("expected symbol", peek().span);
    return advance();
  }
  void expect_rparen() {
    if (peek().kind != SexprToken::Kind::RParen)
      syntax_error("expected ')'", peek().span);
    advance();
  }

  static bool is_numeral(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  }
  static bool is_ident(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }

  FormulaPtr formula() {
    if (peek().kind != SexprToken::Kind::LParen)
      syntax_error("expected '('", peek().span);
    advance();
    SexprToken head = expect_word();
    std::string_view h = head.text;
    FormulaPtr result;
    if (h == "Q") {
      SexprToken id = expect_word();
      if (!is_ident(id.text))
        syntax_error("expected variable name after Q", id.span);
      std::string name(id.text);
      if (std::find(scope_.begin(), scope_.end(), name) != scope_.end()) {
        throw ParseError(ParseError::Kind::DuplicateBinding,
                         "variable '" + name + "' is already bound in scope",
                         id.span);
      }
      scope_.push_back(name);
      FormulaPtr body = formula();
      scope_.pop_back();
      count();
      result = mk_qbinder(std::move(name), std::move(body));
    } else if (h == "!") {
      FormulaPtr arg = formula();
      count();
      result = mk_not(std::move(arg));
    } else if (h == "&&" || h == "||" || h == "->") {
      FormulaPtr lhs = formula();
      FormulaPtr rhs = formula();
      count();
      result = h == "&&"  ? mk_and(std::move(lhs), std::move(rhs))
               : h == "||" ? mk_or(std::move(lhs), std::move(rhs))
                           : mk_implies(std::move(lhs), std::move(rhs));
    } else {
      Rel rel;
      if (h == "<") rel = Rel::Lt;
      else if (h == "<=") rel = Rel::Le;
      else if (h == ">") rel = Rel::Gt;
      else if (h == ">=") rel = Rel::Ge;
      else if (h == "=") rel = Rel::Eq;
      else if (h == "!=") rel = Rel::Ne;
      else syntax_error("unknown operator head", head.span);
      TermPtr lhs = term();
      TermPtr rhs = term();
      count();
      result = mk_atom(std::move(lhs), rel, std::move(rhs));
    }
    expect_rparen();
    return result;
  }

  TermPtr term() {
    if (peek().kind == SexprToken::Kind::Word) {
      SexprToken w = advance();
      count();
      if (is_numeral(w.text)) return mk_num(BigInt(std::string(w.text)));
      if (is_ident(w.text)) return mk_var(std::string(w.text));
      syntax_error("expected identifier or numeral", w.span);
    }
    if (peek().kind != SexprToken::Kind::LParen)
      syntax_error("expected term", peek().span);
    advance();
    SexprToken head = expect_word();
    std::string_view h = head.text;
    TermPtr result;
    if (h == "^") {
      TermPtr base = term();
      SexprToken e = expect_word();
      if (!is_numeral(e.text)) {
        throw ParseError(ParseError::Kind::ExponentNotLiteral,
                         "exponent must be a numeral literal", e.span);
      }
      BigInt exp(std::string(e.text));
      if (exp > std::numeric_limits<std::uint64_t>::max())
        throw ParseError(ParseError::Kind::SizeLimit, "exponent too large",
                         e.span);
      count();
      result = mk_pow(std::move(base), exp.convert_to<std::uint64_t>());
    } else if (h == "+" || h == "-" || h == "*") {
      TermPtr lhs = term();
      TermPtr rhs = term();
      count();
      result = h == "+"  ? mk_add(std::move(lhs), std::move(rhs))
               : h == "-" ? mk_sub(std::move(lhs), std::move(rhs))
                          : mk_mul(std::move(lhs), std::move(rhs));
    } else {
      syntax_error("unknown operator head", head.span);
    }
    expect_rparen();
    return result;
  }
};

}  // namespace

FormulaPtr parse_sexpr(std::string_view text, std::size_t node_limit) {
  return SexprParser(text, node_limit).parse();
}

// ---------------------------------------------------------------------------
// Free variables and desugaring

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
  std::visit(
      overloaded{
          [&](const Var& v) { out.insert(v.name); },
          [&](const Numeral&) {},
          [&](const Add& x) { term_vars(*x.lhs, out); term_vars(*x.rhs, out); },
          [&](const Sub& x) { term_vars(*x.lhs, out); term_vars(*x.rhs, out); },
          [&](const Mul& x) { term_vars(*x.lhs, out); term_vars(*x.rhs, out); },
          [&](const Pow& x) { term_vars(*x.base, out); },
      },
      static_cast<const Term::variant&>(t));
}

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  std::visit(
      overloaded{
          [&](const Atom& a) {
            std::set<std::string> vars;
            term_vars(*a.lhs, vars);
            term_vars(*a.rhs, vars);
            for (const auto& v : vars)
              if (!bound.count(v)) out.insert(v);
          },
          [&](const Not& n) { collect_free(*n.arg, bound, out); },
          [&](const And& a) {
            collect_free(*a.lhs, bound, out);
            collect_free(*a.rhs, bound, out);
          },
          [&](const Or& o) {
            collect_free(*o.lhs, bound, out);
            collect_free(*o.rhs, bound, out);
          },
          [&](const Implies& i) {
            collect_free(*i.lhs, bound, out);
            collect_free(*i.rhs, bound, out);
          },
          [&](const QBinder& q) {
            bool inserted = bound.insert(q.var).second;
            collect_free(*q.body, bound, out);
            if (inserted) bound.erase(q.var);
          },
      },
      static_cast<const Formula::variant&>(f));
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

FormulaPtr desugar(const Formula& f) {
  return std::visit(
      overloaded{
          [&](const Atom& a) -> FormulaPtr {
            switch (a.rel) {
              case Rel::Lt: return mk_atom(a.lhs, Rel::Lt, a.rhs);
              case Rel::Eq: return mk_atom(a.lhs, Rel::Eq, a.rhs);
              case Rel::Gt: return mk_atom(a.rhs, Rel::Lt, a.lhs);
              case Rel::Le: return mk_not(mk_atom(a.rhs, Rel::Lt, a.lhs));
              case Rel::Ge: return mk_not(mk_atom(a.lhs, Rel::Lt, a.rhs));
              case Rel::Ne: return mk_not(mk_atom(a.lhs, Rel::Eq, a.rhs));
            }
            throw Error("unreachable relation");
          },
          [&](const Not& n) -> FormulaPtr { return mk_not(desugar(*n.arg)); },
          [&](const And& a) -> FormulaPtr {
            return mk_and(desugar(*a.lhs), desugar(*a.rhs));
          },
          [&](const Or& o) -> FormulaPtr {
            return mk_or(desugar(*o.lhs), desugar(*o.rhs));
          },
          [&](const Implies& i) -> FormulaPtr {
            return mk_or(mk_not(desugar(*i.lhs)), desugar(*i.rhs));
          },
          [&](const QBinder& q) -> FormulaPtr {
            return mk_qbinder(q.var, desugar(*q.body));
          },
      },
      static_cast<const Formula::variant&>(f));
}

}  // namespace aaq
