#include "pptlsl/isomorphism.hpp"

#include <cassert>
#include <sstream>

#include "pptlsl/printer.hpp"

namespace pptlsl {

std::string PropName::str() const {
  std::ostringstream os;
  os << (kind == Kind::Q ? 'q' : 'p') << '_' << i << '_' << j;
  return os.str();
}

std::optional<PropName> PropName::parse(const std::string& name) {
  if (name.size() < 5) return std::nullopt;
  if (name[0] != 'q' && name[0] != 'p') return std::nullopt;
  std::size_t u1 = name.find('_');
  if (u1 != 1) return std::nullopt;
  std::size_t u2 = name.find('_', 2);
  if (u2 == std::string::npos || u2 == 2 || u2 + 1 >= name.size()) return std::nullopt;
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string si = name.substr(2, u2 - 2), sj = name.substr(u2 + 1);
  if (!digits(si) || !digits(sj)) return std::nullopt;
  PropName p;
  p.kind = name[0] == 'q' ? Kind::Q : Kind::P;
  p.i = static_cast<unsigned>(std::stoul(si));
  p.j = static_cast<unsigned>(std::stoul(sj));
  return p;
}

unsigned NameTable::intern(const std::string& name) {
  auto it = index.find(name);
  if (it != index.end()) return it->second;
  unsigned idx = static_cast<unsigned>(vars.size());
  vars.push_back(name);
  index.emplace(name, idx);
  return idx;
}

const std::string& NameTable::name_for(unsigned idx) {
  while (vars.size() <= idx) {
    unsigned k = static_cast<unsigned>(vars.size());
    std::string cand = "x" + std::to_string(k);
    while (index.count(cand)) cand += "_";
    vars.push_back(cand);
    index.emplace(vars.back(), k);
  }
  return vars[idx];
}

PptlF PPTLFormula::atom(std::string name) {
  auto q = std::make_shared<PPTLFormula>();
  q->op = TempOp::State;
  q->prop = std::move(name);
  q->hash = std::hash<std::string>{}(q->prop) ^ 0xabcdu;
  return q;
}

PptlF PPTLFormula::make(TempOp op, std::vector<PptlF> kids, unsigned n) {
  auto q = std::make_shared<PPTLFormula>();
  q->op = op;
  q->kids = std::move(kids);
  q->n = n;
  std::size_t h = 0x9e3779b9u + static_cast<std::size_t>(op) + n;
  for (const auto& k : q->kids) h = h * 31 + k->hash;
  q->hash = h;
  return q;
}

int cmp(const PptlF& a, const PptlF& b) {
  if (a.get() == b.get()) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (int c = a->prop.compare(b->prop)) return c < 0 ? -1 : 1;
  if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (int c = cmp(a->kids[i], b->kids[i])) return c;
  if (a->n != b->n) return a->n < b->n ? -1 : 1;
  return 0;
}

bool equal(const PptlF& a, const PptlF& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return cmp(a, b) == 0;
}

namespace {

constexpr int kQuant = 0, kImplies = 1, kOr = 2, kAnd = 3, kChop = 4, kPrefix = 6,
              kAtom = 8;

void print_pptl(std::ostream& os, const PptlF& q, int required) {
  auto paren = [&](int prec, auto&& body) {
    bool need = prec < required;
    if (need) os << '(';
    body();
    if (need) os << ')';
  };
  auto infix = [&](const char* sym, int prec, int lp, int rp) {
    paren(prec, [&] {
      print_pptl(os, q->kids[0], lp);
      os << ' ' << sym << ' ';
      print_pptl(os, q->kids[1], rp);
    });
  };
  switch (q->op) {
    case TempOp::State: os << q->prop; return;
    case TempOp::Neg:
      paren(kPrefix, [&] {
        os << '!';
        print_pptl(os, q->kids[0], kAtom);
      });
      return;
    case TempOp::Or: infix("||", kOr, kOr, kOr + 1); return;
    case TempOp::And: infix("&&", kAnd, kAnd, kAnd + 1); return;
    case TempOp::Implies: infix("->", kImplies, kImplies + 1, kImplies); return;
    case TempOp::Chop: infix(";", kChop, kChop, kChop + 1); return;
    case TempOp::Next:
      paren(kPrefix, [&] {
        os << "X ";
        print_pptl(os, q->kids[0], kPrefix);
      });
      return;
    case TempOp::NextN:
      paren(kPrefix, [&] {
        os << "X^" << q->n << ' ';
        print_pptl(os, q->kids[0], kPrefix);
      });
      return;
    case TempOp::Always:
      paren(kPrefix, [&] {
        os << "[] ";
        print_pptl(os, q->kids[0], kPrefix);
      });
      return;
    case TempOp::Sometimes:
      paren(kPrefix, [&] {
        os << "<> ";
        print_pptl(os, q->kids[0], kPrefix);
      });
      return;
    case TempOp::Empty: os << "eps"; return;
    case TempOp::Star:
      os << '(';
      print_pptl(os, q->kids[0], kQuant);
      os << ")^*";
      return;
    case TempOp::Plus:
      os << '(';
      print_pptl(os, q->kids[0], kQuant);
      os << ")^+";
      return;
    case TempOp::Prj:
      os << '(';
      for (std::size_t i = 0; i + 1 < q->kids.size(); ++i) {
        if (i) os << ", ";
        print_pptl(os, q->kids[i], kQuant);
      }
      os << ") prj ";
      print_pptl(os, q->kids.back(), kPrefix);
      return;
  }
}

}  // namespace

std::string to_string(const PptlF& q) {
  std::ostringstream os;
  print_pptl(os, q, kQuant);
  return os.str();
}

PropName g_map(const StateF& eq, NameTable& tbl) {
  if (eq->op != StateOp::Eq) throw IsoError("g is defined on atomic equations only");
  const Term &l = eq->lhs, &r = eq->rhs;
  if (l.is_const() && r.is_const()) throw ConstConstError(l.value, r.value);
  PropName p;
  if (l.is_const() || r.is_const()) {
    // canonical orientation: constant on the left
    p.kind = PropName::Kind::Q;
    p.i = l.is_const() ? l.value : r.value;
    p.j = tbl.intern(l.is_const() ? r.name : l.name);
    return p;
  }
  if (l.name == r.name)
    throw IsoError("reflexive equation " + l.name + " = " + r.name +
                   " must be folded before the isomorphic mapping");
  unsigned i = tbl.intern(l.name), j = tbl.intern(r.name);
  p.kind = PropName::Kind::P;
  p.i = std::min(i, j);
  p.j = std::max(i, j);
  return p;
}

StateF g_inverse(const PropName& p, NameTable& tbl) {
  if (p.kind == PropName::Kind::Q)
    return StateFormula::eq(Term::constant(p.i), Term::var(tbl.name_for(p.j)));
  if (p.i >= p.j) throw UnknownPropositionError(p.str());
  return StateFormula::eq(Term::var(tbl.name_for(p.i)), Term::var(tbl.name_for(p.j)));
}

namespace {

PptlF g_state(const StateF& f, NameTable& tbl) {
  switch (f->op) {
    case StateOp::Eq:
      return PPTLFormula::atom(g_map(f, tbl).str());
    case StateOp::Neg:
      return PPTLFormula::make(TempOp::Neg, {g_state(f->a, tbl)});
    case StateOp::Or:
      return PPTLFormula::make(TempOp::Or, {g_state(f->a, tbl), g_state(f->b, tbl)});
    case StateOp::And:
      return PPTLFormula::make(TempOp::And, {g_state(f->a, tbl), g_state(f->b, tbl)});
    case StateOp::Implies:
      return PPTLFormula::make(TempOp::Implies,
                               {g_state(f->a, tbl), g_state(f->b, tbl)});
    default:
      throw IsoError("state leaf is not in the restricted equation fragment");
  }
}

}  // namespace

PptlF G(const TempF& p, NameTable& tbl) {
  if (p->op == TempOp::State) return g_state(p->state, tbl);
  std::vector<PptlF> kids;
  kids.reserve(p->kids.size());
  for (const auto& k : p->kids) kids.push_back(G(k, tbl));
  return PPTLFormula::make(p->op, std::move(kids), p->n);
}

namespace {

StateF h_state(const PptlF& q, NameTable& tbl) {
  switch (q->op) {
    case TempOp::State: {
      auto pn = PropName::parse(q->prop);
      if (!pn) throw UnknownPropositionError(q->prop);
      return g_inverse(*pn, tbl);
    }
    case TempOp::Neg:
      return StateFormula::neg(h_state(q->kids[0], tbl));
    case TempOp::Or:
      return StateFormula::disj(h_state(q->kids[0], tbl), h_state(q->kids[1], tbl));
    case TempOp::And:
      return StateFormula::conj(h_state(q->kids[0], tbl), h_state(q->kids[1], tbl));
    case TempOp::Implies:
      return StateFormula::implies(h_state(q->kids[0], tbl), h_state(q->kids[1], tbl));
    default:
      throw IsoError("unreachable");
  }
}

// A PPTL subtree built purely from propositions and boolean connectives maps
// back into a single state leaf.
bool is_boolean_tree(const PptlF& q) {
  switch (q->op) {
    case TempOp::State:
      return true;
    case TempOp::Neg:
      return is_boolean_tree(q->kids[0]);
    case TempOp::Or:
    case TempOp::And:
    case TempOp::Implies:
      return is_boolean_tree(q->kids[0]) && is_boolean_tree(q->kids[1]);
    default:
      return false;
  }
}

}  // namespace

TempF H(const PptlF& q, NameTable& tbl) {
  if (is_boolean_tree(q)) return TemporalFormula::lift(h_state(q, tbl));
  switch (q->op) {
    case TempOp::Neg:
      return TemporalFormula::neg(H(q->kids[0], tbl));
    case TempOp::Or:
      return TemporalFormula::disj(H(q->kids[0], tbl), H(q->kids[1], tbl));
    case TempOp::And:
      return TemporalFormula::conj(H(q->kids[0], tbl), H(q->kids[1], tbl));
    case TempOp::Implies:
      return TemporalFormula::implies(H(q->kids[0], tbl), H(q->kids[1], tbl));
    case TempOp::Next:
      return TemporalFormula::next(H(q->kids[0], tbl));
    case TempOp::NextN:
      return TemporalFormula::next_n(q->n, H(q->kids[0], tbl));
    case TempOp::Empty:
      return TemporalFormula::empty();
    case TempOp::Chop:
      return TemporalFormula::chop(H(q->kids[0], tbl), H(q->kids[1], tbl));
    case TempOp::Prj: {
      std::vector<TempF> pieces;
      for (std::size_t i = 0; i + 1 < q->kids.size(); ++i)
        pieces.push_back(H(q->kids[i], tbl));
      return TemporalFormula::prj(std::move(pieces), H(q->kids.back(), tbl));
    }
    case TempOp::Star:
      return TemporalFormula::star(H(q->kids[0], tbl));
    case TempOp::Plus:
      return TemporalFormula::plus(H(q->kids[0], tbl));
    case TempOp::Sometimes:
      return TemporalFormula::sometimes(H(q->kids[0], tbl));
    case TempOp::Always:
      return TemporalFormula::always(H(q->kids[0], tbl));
    case TempOp::State:
      return TemporalFormula::lift(h_state(q, tbl));
  }
  throw IsoError("unreachable");
}

namespace {

bool iso_state(const StateF& f, const PptlF& q, NameTable& tbl) {
  switch (f->op) {
    case StateOp::Eq:
      return q->op == TempOp::State && g_map(f, tbl).str() == q->prop;
    case StateOp::Neg:
      return q->op == TempOp::Neg && iso_state(f->a, q->kids[0], tbl);
    case StateOp::Or:
      return q->op == TempOp::Or && iso_state(f->a, q->kids[0], tbl) &&
             iso_state(f->b, q->kids[1], tbl);
    case StateOp::And:
      return q->op == TempOp::And && iso_state(f->a, q->kids[0], tbl) &&
             iso_state(f->b, q->kids[1], tbl);
    case StateOp::Implies:
      return q->op == TempOp::Implies && iso_state(f->a, q->kids[0], tbl) &&
             iso_state(f->b, q->kids[1], tbl);
    default:
      return false;
  }
}

}  // namespace

bool is_isomorphic(const TempF& p, const PptlF& q, NameTable& tbl) {
  if (p->op == TempOp::State) return iso_state(p->state, q, tbl);
  if (p->op != q->op) return false;
  if (p->op == TempOp::Empty) return true;
  if (p->n != q->n) return false;
  if (p->kids.size() != q->kids.size()) return false;
  for (std::size_t i = 0; i < p->kids.size(); ++i)
    if (!is_isomorphic(p->kids[i], q->kids[i], tbl)) return false;
  return true;
}

}  // namespace pptlsl
