#include "pptlsl/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace pptlsl {

namespace {

enum class Tok : uint8_t {
  Nat, Ident,
  KwX, KwEps, KwPrj, KwExists, KwForall, KwAlloc, KwEmp, KwCnt, KwRplus, KwLs,
  KwTrue, KwFalse,
  Eq, EqEq, Geq, Leq, PointsTo, Hook,
  Not, AndAnd, OrOr, Arrow, Star, Plus, Semi, Caret,
  LParen, RParen, LBox, Diamond, Comma, Dot,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  unsigned value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(line_, col_, msg);
  }

  int cur() const { return pos_ < s_.size() ? static_cast<unsigned char>(s_[pos_]) : -1; }

  void bump() {
    if (pos_ < s_.size()) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void next() {
    while (cur() != -1 && std::isspace(cur())) bump();
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    int c = cur();
    if (c == -1) {
      tok_.kind = Tok::End;
      return;
    }
    if (std::isdigit(c)) {
      unsigned v = 0;
      while (cur() != -1 && std::isdigit(cur())) {
        v = v * 10 + static_cast<unsigned>(cur() - '0');
        tok_.text.push_back(static_cast<char>(cur()));
        bump();
      }
      tok_.kind = Tok::Nat;
      tok_.value = v;
      return;
    }
    if (std::isalpha(c) || c == '_' || c == '$') {
      while (cur() != -1 &&
             (std::isalnum(cur()) || cur() == '_' || cur() == '$' || cur() == '\'')) {
        tok_.text.push_back(static_cast<char>(cur()));
        bump();
      }
      const std::string& w = tok_.text;
      if (w == "X") tok_.kind = Tok::KwX;
      else if (w == "eps") tok_.kind = Tok::KwEps;
      else if (w == "prj") tok_.kind = Tok::KwPrj;
      else if (w == "exists") tok_.kind = Tok::KwExists;
      else if (w == "forall") tok_.kind = Tok::KwForall;
      else if (w == "alloc") tok_.kind = Tok::KwAlloc;
      else if (w == "emp") tok_.kind = Tok::KwEmp;
      else if (w == "cnt") tok_.kind = Tok::KwCnt;
      else if (w == "rplus") tok_.kind = Tok::KwRplus;
      else if (w == "ls") tok_.kind = Tok::KwLs;
      else if (w == "true") tok_.kind = Tok::KwTrue;
      else if (w == "false") tok_.kind = Tok::KwFalse;
      else tok_.kind = Tok::Ident;
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < s_.size() && s_[pos_ + 1] == b;
    };
    if (two('|', '-')) {
      // |->
      bump();
      bump();
      if (cur() != '>') fail("expected '|->'");
      bump();
      tok_.kind = Tok::PointsTo;
      return;
    }
    if (two('|', '|')) { bump(); bump(); tok_.kind = Tok::OrOr; return; }
    if (two('~', '>')) { bump(); bump(); tok_.kind = Tok::Hook; return; }
    if (two('&', '&')) { bump(); bump(); tok_.kind = Tok::AndAnd; return; }
    if (two('-', '>')) { bump(); bump(); tok_.kind = Tok::Arrow; return; }
    if (two('=', '=')) { bump(); bump(); tok_.kind = Tok::EqEq; return; }
    if (two('>', '=')) { bump(); bump(); tok_.kind = Tok::Geq; return; }
    if (two('<', '=')) { bump(); bump(); tok_.kind = Tok::Leq; return; }
    if (two('<', '>')) { bump(); bump(); tok_.kind = Tok::Diamond; return; }
    if (two('[', ']')) { bump(); bump(); tok_.kind = Tok::LBox; return; }
    switch (c) {
      case '=': bump(); tok_.kind = Tok::Eq; return;
      case '!': bump(); tok_.kind = Tok::Not; return;
      case '*': bump(); tok_.kind = Tok::Star; return;
      case '+': bump(); tok_.kind = Tok::Plus; return;
      case ';': bump(); tok_.kind = Tok::Semi; return;
      case '^': bump(); tok_.kind = Tok::Caret; return;
      case '(': bump(); tok_.kind = Tok::LParen; return;
      case ')': bump(); tok_.kind = Tok::RParen; return;
      case ',': bump(); tok_.kind = Tok::Comma; return;
      case '.': bump(); tok_.kind = Tok::Dot; return;
      default: fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const ParseOptions& opts)
      : lex_(text), opts_(opts) {}

  TempF run() {
    TempF p = parse_implies();
    expect(Tok::End, "end of input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(lex_.peek().line, lex_.peek().col, msg);
  }

  bool at(Tok k) const { return lex_.peek().kind == k; }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    return lex_.take();
  }

  bool accept(Tok k) {
    if (at(k)) {
      lex_.take();
      return true;
    }
    return false;
  }

  StateF demand_state(const TempF& p, const char* ctx) {
    if (!p->is_state()) fail(std::string(ctx) + " requires a state formula operand");
    return p->state;
  }

  // Connectives collapse to the state layer when all operands are state
  // formulas; a formula without temporal operators is a state formula.
  TempF mk_neg(TempF p) {
    if (p->is_state()) return TemporalFormula::lift(StateFormula::neg(p->state));
    return TemporalFormula::neg(std::move(p));
  }
  TempF mk_or(TempF a, TempF b) {
    if (a->is_state() && b->is_state())
      return TemporalFormula::lift(StateFormula::disj(a->state, b->state));
    return TemporalFormula::disj(std::move(a), std::move(b));
  }
  TempF mk_and(TempF a, TempF b) {
    if (a->is_state() && b->is_state())
      return TemporalFormula::lift(StateFormula::conj(a->state, b->state));
    return TemporalFormula::conj(std::move(a), std::move(b));
  }
  TempF mk_implies(TempF a, TempF b) {
    if (a->is_state() && b->is_state())
      return TemporalFormula::lift(StateFormula::implies(a->state, b->state));
    return TemporalFormula::implies(std::move(a), std::move(b));
  }

  TempF parse_implies() {
    TempF a = parse_or();
    if (accept(Tok::Arrow)) {
      TempF b = parse_implies();
      return mk_implies(std::move(a), std::move(b));
    }
    return a;
  }

  TempF parse_or() {
    TempF a = parse_and();
    while (accept(Tok::OrOr)) a = mk_or(std::move(a), parse_and());
    return a;
  }

  TempF parse_and() {
    TempF a = parse_chop();
    while (accept(Tok::AndAnd)) a = mk_and(std::move(a), parse_chop());
    return a;
  }

  TempF parse_chop() {
    TempF a = parse_sep();
    while (accept(Tok::Semi)) a = TemporalFormula::chop(std::move(a), parse_sep());
    return a;
  }

  TempF parse_sep() {
    TempF a = parse_prefix();
    while (at(Tok::Star)) {
      lex_.take();
      TempF b = parse_prefix();
      StateF sa = demand_state(a, "separating conjunction");
      StateF sb = demand_state(b, "separating conjunction");
      a = TemporalFormula::lift(StateFormula::sep(sa, sb));
    }
    return a;
  }

  TempF parse_prefix() {
    if (accept(Tok::Not)) return mk_neg(parse_prefix());
    if (at(Tok::KwX)) {
      lex_.take();
      if (accept(Tok::Caret)) {
        Token n = expect(Tok::Nat, "exponent after 'X^'");
        return TemporalFormula::next_n(n.value, parse_prefix());
      }
      return TemporalFormula::next(parse_prefix());
    }
    if (accept(Tok::LBox)) return TemporalFormula::always(parse_prefix());
    if (accept(Tok::Diamond)) return TemporalFormula::sometimes(parse_prefix());
    return parse_postfix();
  }

  TempF parse_postfix() {
    TempF p = parse_primary();
    while (at(Tok::Caret)) {
      lex_.take();
      if (accept(Tok::Star)) {
        p = TemporalFormula::star(std::move(p));
      } else if (accept(Tok::Plus)) {
        p = TemporalFormula::plus(std::move(p));
      } else {
        fail("expected '*' or '+' after '^'");
      }
    }
    return p;
  }

  Term parse_term() {
    if (at(Tok::Nat)) return Term::constant(lex_.take().value);
    if (at(Tok::Ident)) {
      Token t = lex_.take();
      if (!opts_.allow_reserved && is_reserved_name(t.text))
        throw SyntaxError(t.line, t.col,
                          "identifier '" + t.text + "' uses the reserved '" +
                              kReservedPrefix + "' namespace");
      return Term::var(t.text);
    }
    fail("expected a term (number or identifier)");
  }

  TempF parse_quantifier(bool is_exists) {
    Token x = expect(Tok::Ident, "bound variable");
    if (!opts_.allow_reserved && is_reserved_name(x.text))
      throw SyntaxError(x.line, x.col, "bound variable in reserved namespace");
    expect(Tok::Dot, "'.'");
    TempF body = parse_implies();
    StateF sb = demand_state(body, is_exists ? "exists" : "forall");
    StateF f = is_exists ? StateFormula::exists(x.text, sb)
                         : StateFormula::forall(x.text, sb);
    return TemporalFormula::lift(f);
  }

  TempF parse_primary() {
    switch (lex_.peek().kind) {
      case Tok::KwEps:
        lex_.take();
        return TemporalFormula::empty();
      case Tok::KwTrue:
        lex_.take();
        return TemporalFormula::state_true();
      case Tok::KwFalse:
        lex_.take();
        return TemporalFormula::state_false();
      case Tok::KwEmp:
        lex_.take();
        return TemporalFormula::lift(StateFormula::emp());
      case Tok::KwExists:
        lex_.take();
        return parse_quantifier(true);
      case Tok::KwForall:
        lex_.take();
        return parse_quantifier(false);
      case Tok::KwAlloc: {
        lex_.take();
        expect(Tok::LParen, "'('");
        Term e = parse_term();
        expect(Tok::RParen, "')'");
        return TemporalFormula::lift(StateFormula::alloc(e));
      }
      case Tok::KwCnt: {
        lex_.take();
        expect(Tok::LParen, "'('");
        Term e = parse_term();
        expect(Tok::RParen, "')'");
        Tok rel = lex_.peek().kind;
        if (rel != Tok::Geq && rel != Tok::Leq && rel != Tok::EqEq)
          fail("expected '>=', '<=' or '==' after cnt(e)");
        lex_.take();
        Token n = expect(Tok::Nat, "a bound after the comparison");
        StateF f = rel == Tok::Geq   ? StateFormula::pred_geq(e, n.value)
                   : rel == Tok::Leq ? StateFormula::pred_leq(e, n.value)
                                     : StateFormula::pred_eq(e, n.value);
        return TemporalFormula::lift(f);
      }
      case Tok::KwRplus:
      case Tok::KwLs: {
        bool is_ls = lex_.peek().kind == Tok::KwLs;
        lex_.take();
        expect(Tok::LParen, "'('");
        Term a = parse_term();
        expect(Tok::Comma, "','");
        Term b = parse_term();
        expect(Tok::RParen, "')'");
        StateF f = is_ls ? StateFormula::ls(a, b) : StateFormula::rplus(a, b);
        return TemporalFormula::lift(f);
      }
      case Tok::LParen: {
        lex_.take();
        std::vector<TempF> items;
        items.push_back(parse_implies());
        while (accept(Tok::Comma)) items.push_back(parse_implies());
        expect(Tok::RParen, "')'");
        if (at(Tok::KwPrj)) {
          lex_.take();
          TempF head = parse_prefix();
          return TemporalFormula::prj(std::move(items), std::move(head));
        }
        if (items.size() != 1) fail("expected 'prj' after projection list");
        return items[0];
      }
      case Tok::Nat:
      case Tok::Ident: {
        Term e1 = parse_term();
        switch (lex_.peek().kind) {
          case Tok::Eq: {
            lex_.take();
            Term e2 = parse_term();
            return TemporalFormula::lift(StateFormula::eq(e1, e2));
          }
          case Tok::PointsTo: {
            lex_.take();
            Term e2 = parse_term();
            return TemporalFormula::lift(StateFormula::points_to(e1, e2));
          }
          case Tok::Hook: {
            lex_.take();
            Term e2 = parse_term();
            return TemporalFormula::lift(StateFormula::hook(e1, e2));
          }
          default:
            fail("expected '=', '|->' or '~>' after a term");
        }
      }
      default:
        fail("expected a formula");
    }
  }

  Lexer lex_;
  ParseOptions opts_;
};

}  // namespace

TempF parse_formula(const std::string& text, const ParseOptions& opts) {
  Parser p(text, opts);
  return p.run();
}

}  // namespace pptlsl
