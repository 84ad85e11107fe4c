#include "pptlsl/normal_form.hpp"

#include <algorithm>
#include <cassert>

#include "pptlsl/expand.hpp"
#include "pptlsl/state_eval.hpp"

namespace pptlsl {

using SF = StateFormula;
using TF = TemporalFormula;

EqAtom EqAtom::make(Term a, Term b) {
  if (cmp(a, b) > 0) std::swap(a, b);
  return EqAtom{a, b};
}

int cmp(const EqAtom& a, const EqAtom& b) {
  if (int c = cmp(a.l, b.l)) return c;
  return cmp(a.r, b.r);
}

int cmp(const Literal& a, const Literal& b) {
  if (int c = cmp(a.atom, b.atom)) return c;
  if (a.pos != b.pos) return a.pos ? 1 : -1;
  return 0;
}

std::optional<LiteralConj> LiteralConj::make(std::vector<Literal> lits) {
  std::sort(lits.begin(), lits.end(),
            [](const Literal& a, const Literal& b) { return cmp(a, b) < 0; });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  // same atom with both signs
  for (std::size_t i = 0; i + 1 < lits.size(); ++i)
    if (cmp(lits[i].atom, lits[i + 1].atom) == 0 && lits[i].pos != lits[i + 1].pos)
      return std::nullopt;
  // a variable pinned to two distinct constants
  std::map<std::string, unsigned> pinned;
  for (const auto& l : lits) {
    if (!l.pos) continue;
    if (l.atom.l.is_const() && l.atom.r.is_var()) {
      auto [it, fresh] = pinned.emplace(l.atom.r.name, l.atom.l.value);
      if (!fresh && it->second != l.atom.l.value) return std::nullopt;
    }
  }
  LiteralConj out;
  out.lits_ = std::move(lits);
  return out;
}

std::optional<LiteralConj> LiteralConj::conjoin(const LiteralConj& other) const {
  std::vector<Literal> all = lits_;
  all.insert(all.end(), other.lits_.begin(), other.lits_.end());
  return make(std::move(all));
}

StateF LiteralConj::to_formula() const {
  std::vector<StateF> parts;
  parts.reserve(lits_.size());
  for (const auto& l : lits_) {
    StateF atom = l.atom.to_formula();
    parts.push_back(l.pos ? atom : SF::neg(atom));
  }
  return SF::conj_all(parts);
}

std::string LiteralConj::key() const {
  std::string out;
  for (const auto& l : lits_) {
    out += l.pos ? '+' : '-';
    out += l.atom.l.is_const() ? std::to_string(l.atom.l.value) : l.atom.l.name;
    out += '=';
    out += l.atom.r.is_const() ? std::to_string(l.atom.r.value) : l.atom.r.name;
    out += ';';
  }
  return out;
}

namespace {

Dnf dedupe(Dnf d) {
  std::sort(d.begin(), d.end(), [](const LiteralConj& a, const LiteralConj& b) {
    return a.key() < b.key();
  });
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

Dnf cross(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& x : a)
    for (const auto& y : b)
      if (auto c = x.conjoin(y)) out.push_back(*c);
  return dedupe(std::move(out));
}

Dnf unite(Dnf a, const Dnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  return dedupe(std::move(a));
}

// full-minterm clauses over the free variables, by enumeration
Dnf semantic_dnf(const StateF& f, const Config& cfg) {
  std::vector<std::string> vars;
  for (const auto& v : free_vars(f)) vars.push_back(v);
  Dnf out;
  std::vector<unsigned> vals(vars.size(), 0);
  for (;;) {
    MemoryState s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.stack[vars[i]] = vals[i];
    if (eval_state(s, f, cfg)) {
      std::vector<Literal> lits;
      for (std::size_t i = 0; i < vars.size(); ++i)
        lits.push_back({EqAtom::make(Term::constant(vals[i]), Term::var(vars[i])), true});
      out.push_back(*LiteralConj::make(std::move(lits)));
    }
    std::size_t i = 0;
    for (; i < vals.size(); ++i) {
      if (vals[i] < cfg.max_loc) {
        ++vals[i];
        break;
      }
      vals[i] = 0;
    }
    if (i == vals.size()) break;
  }
  return dedupe(std::move(out));
}

Dnf dnf_pos(const StateF& f, const Config& cfg);
Dnf dnf_negated(const StateF& f, const Config& cfg);

Dnf dnf_pos(const StateF& f, const Config& cfg) {
  switch (f->op) {
    case StateOp::True:
      return {LiteralConj{}};
    case StateOp::False:
      return {};
    case StateOp::Eq: {
      StateF g = fold(f);
      if (g->op == StateOp::True) return {LiteralConj{}};
      if (g->op == StateOp::False) return {};
      return {*LiteralConj::make({{EqAtom::make(g->lhs, g->rhs), true}})};
    }
    case StateOp::Neg:
      return dnf_negated(f->a, cfg);
    case StateOp::Or:
      return unite(dnf_pos(f->a, cfg), dnf_pos(f->b, cfg));
    case StateOp::And:
      return cross(dnf_pos(f->a, cfg), dnf_pos(f->b, cfg));
    case StateOp::Implies:
      return unite(dnf_negated(f->a, cfg), dnf_pos(f->b, cfg));
    case StateOp::BoundedOr:
      return semantic_dnf(f, cfg);
    default:
      throw Error("dnf: formula is not heap-free");
  }
}

Dnf dnf_negated(const StateF& f, const Config& cfg) {
  switch (f->op) {
    case StateOp::True:
      return {};
    case StateOp::False:
      return {LiteralConj{}};
    case StateOp::Eq: {
      StateF g = fold(f);
      if (g->op == StateOp::True) return {};
      if (g->op == StateOp::False) return {LiteralConj{}};
      return {*LiteralConj::make({{EqAtom::make(g->lhs, g->rhs), false}})};
    }
    case StateOp::Neg:
      return dnf_pos(f->a, cfg);
    case StateOp::Or:
      return cross(dnf_negated(f->a, cfg), dnf_negated(f->b, cfg));
    case StateOp::And:
      return unite(dnf_negated(f->a, cfg), dnf_negated(f->b, cfg));
    case StateOp::Implies:
      return cross(dnf_pos(f->a, cfg), dnf_negated(f->b, cfg));
    case StateOp::BoundedOr:
      return semantic_dnf(SF::neg(f), cfg);
    default:
      throw Error("dnf: formula is not heap-free");
  }
}

}  // namespace

Dnf dnf(const StateF& f, const Config& cfg) { return dnf_pos(f, cfg); }

std::optional<Stack> state_sat(const StateF& f, const Config& cfg) {
  std::vector<std::string> vars;
  for (const auto& v : free_vars(f)) vars.push_back(v);
  MemoryState s;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == vars.size()) return eval_state(s, f, cfg);
    for (unsigned v = 0; v <= cfg.max_loc; ++v) {
      s.stack[vars[i]] = v;
      if (go(i + 1)) return true;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return s.stack;
}

namespace {

const TempF& true_node() {
  static const TempF t = TF::state_true();
  return t;
}
const TempF& false_node() {
  static const TempF t = TF::state_false();
  return t;
}

bool is_state_true(const TempF& p) {
  return p->op == TempOp::State && p->state->op == StateOp::True;
}
bool is_state_false(const TempF& p) {
  return p->op == TempOp::State && p->state->op == StateOp::False;
}

void collect_state(StateOp op, const StateF& f, std::vector<StateF>& out) {
  if (f->op == op) {
    collect_state(op, f->a, out);
    collect_state(op, f->b, out);
    return;
  }
  out.push_back(f);
}

}  // namespace

StateF canon_state(const StateF& f) {
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
      return f;
    case StateOp::Eq: {
      StateF g = fold(f);
      if (g->op != StateOp::Eq) return g;
      return cmp(g->lhs, g->rhs) <= 0 ? g : SF::eq(g->rhs, g->lhs);
    }
    case StateOp::Neg: {
      StateF a = canon_state(f->a);
      if (a->op == StateOp::Neg) return a->a;
      if (a->op == StateOp::True) return SF::fals();
      if (a->op == StateOp::False) return SF::tru();
      return SF::neg(a);
    }
    case StateOp::Or:
    case StateOp::And: {
      bool is_or = f->op == StateOp::Or;
      std::vector<StateF> raw;
      collect_state(f->op, f, raw);
      std::vector<StateF> kids;
      for (const auto& k : raw) {
        StateF c = canon_state(k);
        if (c->op == (is_or ? StateOp::False : StateOp::True)) continue;
        if (c->op == (is_or ? StateOp::True : StateOp::False))
          return is_or ? SF::tru() : SF::fals();
        if (c->op == f->op) {
          std::vector<StateF> nested;
          collect_state(f->op, c, nested);
          kids.insert(kids.end(), nested.begin(), nested.end());
        } else {
          kids.push_back(c);
        }
      }
      std::sort(kids.begin(), kids.end(),
                [](const StateF& a, const StateF& b) { return cmp(a, b) < 0; });
      kids.erase(std::unique(kids.begin(), kids.end(),
                             [](const StateF& a, const StateF& b) { return equal(a, b); }),
                 kids.end());
      if (kids.empty()) return is_or ? SF::fals() : SF::tru();
      return is_or ? SF::disj_all(kids) : SF::conj_all(kids);
    }
    case StateOp::Implies:
      return canon_state(SF::disj(SF::neg(f->a), f->b));
    case StateOp::Exists: {
      StateF a = canon_state(f->a);
      if (a->op == StateOp::True || a->op == StateOp::False) return a;
      return SF::exists(f->binder, a);
    }
    case StateOp::BoundedOr: {
      StateF a = canon_state(f->a);
      if (a->op == StateOp::True || a->op == StateOp::False) return a;
      if (f->sep_split) return SF::bounded_or(f->binders, a, f->sep_split);
      return SF::bounded_or(f->binders, a);
    }
    default: {
      // heap constructs keep their shape
      if (f->a) {
        StateF a = canon_state(f->a);
        StateF b = f->b ? canon_state(f->b) : nullptr;
        if (f->op == StateOp::SepConj) return SF::sep(a, b);
      }
      return f;
    }
  }
}

namespace {

void collect_temp(TempOp op, const TempF& p, std::vector<TempF>& out) {
  if (p->op == op) {
    collect_temp(op, p->kids[0], out);
    collect_temp(op, p->kids[1], out);
    return;
  }
  out.push_back(p);
}

TempF rebuild_list(TempOp op, const std::vector<TempF>& kids) {
  TempF out = kids.back();
  for (auto it = kids.rbegin() + 1; it != kids.rend(); ++it)
    out = op == TempOp::Or ? TF::disj(*it, out) : TF::conj(*it, out);
  return out;
}

TempF canon_list(TempOp op, const std::vector<TempF>& raw);

TempF canon_neg(const TempF& k) {
  // k is canonical
  if (k->op == TempOp::State)
    return TF::lift(canon_state(SF::neg(k->state)));
  if (k->op == TempOp::Neg) return k->kids[0];
  if (k->op == TempOp::Or || k->op == TempOp::And) {
    std::vector<TempF> kids;
    collect_temp(k->op, k, kids);
    std::vector<TempF> negs;
    negs.reserve(kids.size());
    for (const auto& c : kids) negs.push_back(canon_neg(c));
    return canon_list(k->op == TempOp::Or ? TempOp::And : TempOp::Or, negs);
  }
  return TF::neg(k);
}

TempF canon_list(TempOp op, const std::vector<TempF>& raw) {
  bool is_or = op == TempOp::Or;
  std::vector<TempF> kids;
  for (const auto& c : raw) {
    if (is_or ? is_state_false(c) : is_state_true(c)) continue;
    if (is_or ? is_state_true(c) : is_state_false(c))
      return is_or ? true_node() : false_node();
    if (c->op == op) {
      collect_temp(op, c, kids);
    } else {
      kids.push_back(c);
    }
  }
  std::sort(kids.begin(), kids.end(),
            [](const TempF& a, const TempF& b) { return cmp(a, b) < 0; });
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const TempF& a, const TempF& b) { return equal(a, b); }),
             kids.end());
  if (kids.empty()) return is_or ? false_node() : true_node();
  if (kids.size() == 1) return kids[0];
  bool all_state = true;
  for (const auto& k : kids) all_state = all_state && k->op == TempOp::State;
  if (all_state) {
    std::vector<StateF> ss;
    ss.reserve(kids.size());
    for (const auto& k : kids) ss.push_back(k->state);
    return TF::lift(canon_state(is_or ? SF::disj_all(ss) : SF::conj_all(ss)));
  }
  return rebuild_list(op, kids);
}

}  // namespace

TempF canon(const TempF& p) {
  switch (p->op) {
    case TempOp::State:
      return TF::lift(canon_state(p->state));
    case TempOp::Neg:
      return canon_neg(canon(p->kids[0]));
    case TempOp::Or:
    case TempOp::And: {
      std::vector<TempF> raw;
      collect_temp(p->op, p, raw);
      std::vector<TempF> kids;
      kids.reserve(raw.size());
      for (const auto& k : raw) kids.push_back(canon(k));
      return canon_list(p->op, kids);
    }
    case TempOp::Next: {
      TempF k = canon(p->kids[0]);
      if (is_state_false(k)) return false_node();
      return TF::next(k);
    }
    case TempOp::Chop: {
      TempF a = canon(p->kids[0]), b = canon(p->kids[1]);
      if (is_state_false(a) || is_state_false(b)) return false_node();
      return TF::chop(a, b, p->chop_tag);
    }
    case TempOp::Star:
      return TF::star_tagged(canon(p->kids[0]), p->star_tag_a, p->star_tag_b,
                             p->star_parity);
    case TempOp::Prj: {
      std::vector<TempF> pieces;
      for (std::size_t i = 0; i + 1 < p->kids.size(); ++i)
        pieces.push_back(canon(p->kids[i]));
      return TF::prj(std::move(pieces), canon(p->kids.back()), p->prj_tags);
    }
    default:
      return p;  // Empty and any leftover sugar pass through
  }
}

TempF assign_tags(const TempF& p, int& next_tag) {
  switch (p->op) {
    case TempOp::State:
      return p;
    case TempOp::Chop: {
      int tag = next_tag++;
      TempF a = assign_tags(p->kids[0], next_tag);
      TempF b = assign_tags(p->kids[1], next_tag);
      return TF::chop(a, b, tag);
    }
    case TempOp::Star: {
      int ta = next_tag++;
      int tb = next_tag++;
      return TF::star_tagged(assign_tags(p->kids[0], next_tag), ta, tb, false);
    }
    case TempOp::Prj: {
      std::size_t m = p->kids.size() - 1;
      std::vector<int> tags;
      tags.reserve(m);
      for (std::size_t i = 0; i < m; ++i) tags.push_back(next_tag++);
      std::vector<TempF> pieces;
      for (std::size_t i = 0; i < m; ++i) pieces.push_back(assign_tags(p->kids[i], next_tag));
      return TF::prj(std::move(pieces), assign_tags(p->kids.back(), next_tag),
                     std::move(tags));
    }
    default: {
      if (p->kids.empty()) return p;
      std::vector<TempF> kids;
      kids.reserve(p->kids.size());
      for (const auto& k : p->kids) kids.push_back(assign_tags(k, next_tag));
      switch (p->op) {
        case TempOp::Neg: return TF::neg(kids[0]);
        case TempOp::Or: return TF::disj(kids[0], kids[1]);
        case TempOp::And: return TF::conj(kids[0], kids[1]);
        case TempOp::Implies: return TF::implies(kids[0], kids[1]);
        case TempOp::Next: return TF::next(kids[0]);
        case TempOp::NextN: return TF::next_n(p->n, kids[0]);
        case TempOp::Plus: return TF::plus(kids[0]);
        case TempOp::Sometimes: return TF::sometimes(kids[0]);
        case TempOp::Always: return TF::always(kids[0]);
        default: return p;
      }
    }
  }
}

void NormalForm::normalize() {
  std::sort(terminals.begin(), terminals.end(),
            [](const LiteralConj& a, const LiteralConj& b) { return a.key() < b.key(); });
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  futures.erase(std::remove_if(futures.begin(), futures.end(),
                               [](const NFClause& c) { return is_state_false(c.succ); }),
                futures.end());
  std::sort(futures.begin(), futures.end(), [](const NFClause& a, const NFClause& b) {
    if (a.guard.key() != b.guard.key()) return a.guard.key() < b.guard.key();
    return cmp(a.succ, b.succ) < 0;
  });
  futures.erase(std::unique(futures.begin(), futures.end(),
                            [](const NFClause& a, const NFClause& b) {
                              return a.guard == b.guard && equal(a.succ, b.succ);
                            }),
                futures.end());
}

TempF reassemble(const NormalForm& n) {
  std::vector<TempF> parts;
  for (const auto& g : n.terminals)
    parts.push_back(TF::conj(TF::lift(g.to_formula()), TF::empty()));
  for (const auto& c : n.futures)
    parts.push_back(TF::conj(TF::lift(c.guard.to_formula()), TF::next(c.succ)));
  if (parts.empty()) return TF::state_false();
  TempF out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = TF::disj(*it, out);
  return out;
}

const NormalForm& NfContext::normal_form(const TempF& canonical) {
  auto it = memo_.find(canonical);
  if (it != memo_.end()) return it->second;
  NormalForm n = compute(canonical);
  n.normalize();
  auto [pos, _] = memo_.emplace(canonical, std::move(n));
  return pos->second;
}

NormalForm NfContext::compute(const TempF& p) {
  switch (p->op) {
    case TempOp::State:
      return nf_state(p->state);
    case TempOp::Or: {
      std::vector<TempF> kids;
      collect_temp(TempOp::Or, p, kids);
      NormalForm out;
      for (const auto& k : kids) {
        const NormalForm& nk = normal_form(k);
        out.terminals.insert(out.terminals.end(), nk.terminals.begin(), nk.terminals.end());
        out.futures.insert(out.futures.end(), nk.futures.begin(), nk.futures.end());
      }
      return out;
    }
    case TempOp::And:
      return nf_and(p->kids[0], p->kids[1]);
    case TempOp::Neg:
      return nf_neg(p->kids[0]);
    case TempOp::Next: {
      NormalForm out;
      out.futures.push_back({LiteralConj{}, p->kids[0]});
      return out;
    }
    case TempOp::Chop:
      return nf_chop(p->kids[0], p->kids[1], p->chop_tag);
    case TempOp::Star:
      return nf_star(p);
    case TempOp::Prj:
      return nf_prj(p->kids, p->prj_tags);
    case TempOp::Empty: {
      NormalForm out;
      out.terminals.push_back(LiteralConj{});
      return out;
    }
    default:
      throw Error("nf: unexpanded derived operator in restricted formula");
  }
}

NormalForm NfContext::nf_state(const StateF& s) {
  NormalForm out;
  Dnf d = dnf(s, cfg_);
  for (const auto& cl : d) {
    out.terminals.push_back(cl);
    out.futures.push_back({cl, true_node()});
  }
  return out;
}

NormalForm NfContext::nf_and(const TempF& a, const TempF& b) {
  const NormalForm na = normal_form(a);
  const NormalForm nb = normal_form(b);
  NormalForm out;
  for (const auto& ga : na.terminals)
    for (const auto& gb : nb.terminals)
      if (auto g = ga.conjoin(gb)) out.terminals.push_back(*g);
  for (const auto& fa : na.futures)
    for (const auto& fb : nb.futures)
      if (auto g = fa.guard.conjoin(fb.guard))
        out.futures.push_back({*g, canon(TF::conj(fa.succ, fb.succ))});
  return out;
}

NormalForm NfContext::nf_neg(const TempF& inner) {
  CompleteNormalForm rows = conf_rows(normal_form(inner), *this);
  return neg_rows(rows);
}

NormalForm NfContext::nf_chop(const TempF& a, const TempF& b, int tag) {
  const NormalForm na = normal_form(a);
  NormalForm out;
  for (const auto& fa : na.futures)
    out.futures.push_back({fa.guard, canon(TF::chop(fa.succ, b, tag))});
  if (!na.terminals.empty()) {
    const NormalForm nb = normal_form(b);
    for (const auto& ga : na.terminals) {
      for (const auto& gb : nb.terminals)
        if (auto g = ga.conjoin(gb)) out.terminals.push_back(*g);
      for (const auto& fb : nb.futures)
        if (auto g = ga.conjoin(fb.guard)) out.futures.push_back({*g, fb.succ});
    }
  }
  return out;
}

NormalForm NfContext::nf_star(const TempF& star_node) {
  const TempF& body = star_node->kids[0];
  int cur_tag = star_node->star_parity ? star_node->star_tag_b : star_node->star_tag_a;
  TempF flipped = TF::star_tagged(body, star_node->star_tag_a, star_node->star_tag_b,
                                  !star_node->star_parity);
  NormalForm out;
  out.terminals.push_back(LiteralConj{});
  // only advancing first pieces: a point piece leaves the star obligation
  // unchanged, so it adds nothing
  const NormalForm nb = normal_form(body);
  for (const auto& fb : nb.futures)
    out.futures.push_back({fb.guard, canon(TF::chop(fb.succ, flipped, cur_tag))});
  return out;
}

NormalForm NfContext::nf_prj(const std::vector<TempF>& kids, const std::vector<int>& tags) {
  std::vector<TempF> pieces(kids.begin(), kids.end() - 1);
  return prj_rec(pieces, 0, kids.back(), tags);
}

NormalForm NfContext::prj_rec(const std::vector<TempF>& pieces, std::size_t from,
                              const TempF& head, const std::vector<int>& tags) {
  if (from == pieces.size()) return normal_form(head);
  const NormalForm nh = normal_form(pieces[from]);
  NormalForm out;
  if (!nh.terminals.empty()) {
    // head piece holds at a point: strip it and project the rest
    NormalForm sub = prj_rec(pieces, from + 1, head, tags);
    for (const auto& gh : nh.terminals) {
      for (const auto& t : sub.terminals)
        if (auto g = gh.conjoin(t)) out.terminals.push_back(*g);
      for (const auto& fc : sub.futures)
        if (auto g = gh.conjoin(fc.guard)) out.futures.push_back({*g, fc.succ});
    }
  }
  if (!nh.futures.empty()) {
    const NormalForm nq = normal_form(head);
    for (const auto& fh : nh.futures) {
      // head formula ends at the current projected state: the pieces chop
      // the remaining interval
      for (const auto& gq : nq.terminals) {
        if (auto g = fh.guard.conjoin(gq)) {
          TempF succ = fh.succ;
          if (from + 1 < pieces.size()) {
            TempF chain = pieces.back();
            for (std::size_t i = pieces.size() - 1; i-- > from + 1;)
              chain = TF::chop(pieces[i], chain, tags[i]);
            succ = TF::chop(succ, chain, tags[from]);
          }
          out.futures.push_back({*g, canon(succ)});
        }
      }
      // head formula advances to the next projected state
      for (const auto& fq : nq.futures) {
        if (auto g = fh.guard.conjoin(fq.guard)) {
          TempF sub;
          if (from + 1 == pieces.size()) {
            sub = fq.succ;
          } else {
            std::vector<TempF> rest(pieces.begin() + from + 1, pieces.end());
            std::vector<int> rest_tags(tags.begin() + from + 1, tags.end());
            sub = TF::prj(std::move(rest), fq.succ, std::move(rest_tags));
          }
          out.futures.push_back({*g, canon(TF::chop(fh.succ, sub, tags[from]))});
        }
      }
    }
  }
  return out;
}

CompleteNormalForm conf_rows(const NormalForm& n, NfContext& ctx) {
  CompleteNormalForm out;
  std::vector<EqAtom> atoms;
  auto add_atoms = [&](const LiteralConj& g) {
    for (const auto& l : g.literals()) atoms.push_back(l.atom);
  };
  for (const auto& t : n.terminals) add_atoms(t);
  for (const auto& f : n.futures) add_atoms(f.guard);
  std::sort(atoms.begin(), atoms.end(),
            [](const EqAtom& a, const EqAtom& b) { return cmp(a, b) < 0; });
  atoms.erase(std::unique(atoms.begin(), atoms.end(),
                          [](const EqAtom& a, const EqAtom& b) { return cmp(a, b) == 0; }),
              atoms.end());
  if (atoms.size() > ctx.options().max_conf_atoms)
    throw BudgetExceededError("complete normal form over " +
                              std::to_string(atoms.size()) + " atoms exceeds the budget");
  out.atoms = atoms;

  auto covered = [&](const LiteralConj& guard, std::size_t mask) {
    for (const auto& l : guard.literals()) {
      auto it = std::lower_bound(atoms.begin(), atoms.end(), l.atom,
                                 [](const EqAtom& a, const EqAtom& b) { return cmp(a, b) < 0; });
      std::size_t idx = static_cast<std::size_t>(it - atoms.begin());
      bool sign = (mask >> idx) & 1;
      if (sign != l.pos) return false;
    }
    return true;
  };

  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    std::vector<Literal> lits;
    lits.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i)
      lits.push_back({atoms[i], ((mask >> i) & 1) != 0});
    auto guard = LiteralConj::make(std::move(lits));
    if (!guard) continue;  // contradictory minterm covers no state
    CompleteNormalForm::Row row;
    row.guard = *guard;
    row.terminal = false;
    for (const auto& t : n.terminals)
      if (covered(t, mask)) {
        row.terminal = true;
        break;
      }
    std::vector<TempF> succs;
    for (const auto& f : n.futures)
      if (covered(f.guard, mask)) succs.push_back(f.succ);
    if (succs.empty()) {
      row.succ = false_node();
    } else {
      TempF d = succs.back();
      for (auto it = succs.rbegin() + 1; it != succs.rend(); ++it) d = TF::disj(*it, d);
      row.succ = canon(d);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

NormalForm conf(const NormalForm& n, NfContext& ctx) {
  CompleteNormalForm rows = conf_rows(n, ctx);
  NormalForm out;
  for (const auto& row : rows.rows) {
    if (row.terminal) out.terminals.push_back(row.guard);
    out.futures.push_back({row.guard, row.succ});
  }
  // completion keeps X false rows by construction; only sort here
  std::sort(out.terminals.begin(), out.terminals.end(),
            [](const LiteralConj& a, const LiteralConj& b) { return a.key() < b.key(); });
  std::sort(out.futures.begin(), out.futures.end(),
            [](const NFClause& a, const NFClause& b) { return a.guard.key() < b.guard.key(); });
  return out;
}

NormalForm neg_rows(const CompleteNormalForm& c) {
  NormalForm out;
  for (const auto& row : c.rows) {
    if (!row.terminal) out.terminals.push_back(row.guard);
    TempF nsucc = canon_neg(row.succ);
    if (!is_state_false(nsucc)) out.futures.push_back({row.guard, nsucc});
  }
  out.normalize();
  return out;
}

NormalForm neg_nf(const NormalForm& complete, NfContext& ctx) {
  // reconstruct the rows, validating the complete shape
  CompleteNormalForm rows;
  std::vector<EqAtom> atoms;
  for (const auto& f : complete.futures)
    for (const auto& l : f.guard.literals()) atoms.push_back(l.atom);
  for (const auto& t : complete.terminals)
    for (const auto& l : t.literals()) atoms.push_back(l.atom);
  std::sort(atoms.begin(), atoms.end(),
            [](const EqAtom& a, const EqAtom& b) { return cmp(a, b) < 0; });
  atoms.erase(std::unique(atoms.begin(), atoms.end(),
                          [](const EqAtom& a, const EqAtom& b) { return cmp(a, b) == 0; }),
              atoms.end());
  rows.atoms = atoms;
  std::map<std::string, CompleteNormalForm::Row> by_key;
  for (const auto& f : complete.futures) {
    if (f.guard.literals().size() != atoms.size())
      throw IncompleteInputError("future guard is not a full minterm");
    auto [it, fresh] = by_key.emplace(f.guard.key(),
                                      CompleteNormalForm::Row{f.guard, false, f.succ});
    if (!fresh) throw IncompleteInputError("duplicate minterm row");
  }
  std::size_t consistent = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      lits.push_back({atoms[i], ((mask >> i) & 1) != 0});
    if (LiteralConj::make(std::move(lits))) ++consistent;
  }
  if (by_key.size() != consistent)
    throw IncompleteInputError("rows do not cover every consistent minterm");
  for (const auto& t : complete.terminals) {
    auto it = by_key.find(t.key());
    if (it == by_key.end())
      throw IncompleteInputError("terminal guard is not one of the minterm rows");
    it->second.terminal = true;
  }
  for (auto& [_, row] : by_key) rows.rows.push_back(row);
  (void)ctx;
  return neg_rows(rows);
}

TempF prepare_restricted(const TempF& p, const VarVector& c, const Config& cfg) {
  TempF expanded = expand_for_nf(p, cfg);
  TranslationContext tctx;
  tctx.next_index = static_cast<unsigned>(c.size()) + 1;
  TempF translated = translate_F(expanded, c, cfg, tctx);
  int tag = 0;
  TempF tagged = assign_tags(translated, tag);
  return canon(tagged);
}

NormalForm nf(const TempF& p, const VarVector& c, const Config& cfg) {
  NfContext ctx(cfg);
  return ctx.normal_form(prepare_restricted(p, c, cfg));
}

NormalForm chop_nf(const TempF& p1, const TempF& p2, const VarVector& c,
                   const Config& cfg) {
  return nf(TF::chop(p1, p2), c, cfg);
}

NormalForm prj_nf(const std::vector<TempF>& pieces, const TempF& head,
                  const VarVector& c, const Config& cfg) {
  return nf(TF::prj(pieces, head), c, cfg);
}

}  // namespace pptlsl
