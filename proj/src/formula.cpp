#include "pptlsl/formula.hpp"

#include <algorithm>
#include <cassert>

namespace pptlsl {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(const std::string& s) {
  return std::hash<std::string>{}(s);
}

}  // namespace

int cmp(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.is_const() ? -1 : 1;
  if (a.is_const()) {
    if (a.value != b.value) return a.value < b.value ? -1 : 1;
    return 0;
  }
  return a.name.compare(b.name);
}

std::size_t hash_term(const Term& t) {
  std::size_t h = t.is_const() ? 0x51u : 0x52u;
  h = hash_combine(h, t.is_const() ? t.value : hash_string(t.name));
  return h;
}

namespace {

StateF make_state(StateOp op, Term lhs = {}, Term rhs = {}, unsigned count = 0,
                  std::string binder = {}, std::vector<std::string> binders = {},
                  StateF a = nullptr, StateF b = nullptr) {
  auto f = std::make_shared<StateFormula>();
  f->op = op;
  f->lhs = lhs;
  f->rhs = rhs;
  f->count = count;
  f->binder = std::move(binder);
  f->binders = std::move(binders);
  f->a = std::move(a);
  f->b = std::move(b);
  std::size_t h = static_cast<std::size_t>(op) * 0x100000001b3ull;
  h = hash_combine(h, hash_term(f->lhs));
  h = hash_combine(h, hash_term(f->rhs));
  h = hash_combine(h, f->count);
  h = hash_combine(h, hash_string(f->binder));
  for (const auto& v : f->binders) h = hash_combine(h, hash_string(v));
  if (f->a) h = hash_combine(h, f->a->hash);
  if (f->b) h = hash_combine(h, f->b->hash);
  f->hash = h;
  return f;
}

}  // namespace

StateF StateFormula::tru() {
  static const StateF inst = make_state(StateOp::True);
  return inst;
}
StateF StateFormula::fals() {
  static const StateF inst = make_state(StateOp::False);
  return inst;
}
StateF StateFormula::emp() {
  static const StateF inst = make_state(StateOp::Emp);
  return inst;
}
StateF StateFormula::eq(Term l, Term r) { return make_state(StateOp::Eq, l, r); }
StateF StateFormula::points_to(Term l, Term r) { return make_state(StateOp::PointsTo, l, r); }
StateF StateFormula::hook(Term l, Term r) { return make_state(StateOp::Hook, l, r); }
StateF StateFormula::alloc(Term e) { return make_state(StateOp::Alloc, e); }
StateF StateFormula::pred_geq(Term e, unsigned n) { return make_state(StateOp::PredGeq, e, {}, n); }
StateF StateFormula::pred_leq(Term e, unsigned n) { return make_state(StateOp::PredLeq, e, {}, n); }
StateF StateFormula::pred_eq(Term e, unsigned n) { return make_state(StateOp::PredEq, e, {}, n); }
StateF StateFormula::rplus(Term l, Term r) { return make_state(StateOp::RPlus, l, r); }
StateF StateFormula::ls(Term l, Term r) { return make_state(StateOp::Ls, l, r); }
StateF StateFormula::neg(StateF f) {
  assert(f);
  return make_state(StateOp::Neg, {}, {}, 0, {}, {}, std::move(f));
}
StateF StateFormula::disj(StateF l, StateF r) {
  assert(l && r);
  return make_state(StateOp::Or, {}, {}, 0, {}, {}, std::move(l), std::move(r));
}
StateF StateFormula::conj(StateF l, StateF r) {
  assert(l && r);
  return make_state(StateOp::And, {}, {}, 0, {}, {}, std::move(l), std::move(r));
}
StateF StateFormula::implies(StateF l, StateF r) {
  assert(l && r);
  return make_state(StateOp::Implies, {}, {}, 0, {}, {}, std::move(l), std::move(r));
}
StateF StateFormula::sep(StateF l, StateF r) {
  assert(l && r);
  return make_state(StateOp::SepConj, {}, {}, 0, {}, {}, std::move(l), std::move(r));
}
StateF StateFormula::exists(std::string x, StateF f) {
  assert(f);
  return make_state(StateOp::Exists, {}, {}, 0, std::move(x), {}, std::move(f));
}
StateF StateFormula::forall(std::string x, StateF f) {
  assert(f);
  return make_state(StateOp::Forall, {}, {}, 0, std::move(x), {}, std::move(f));
}
StateF StateFormula::bounded_or(std::vector<std::string> vars, StateF body) {
  assert(body);
  return make_state(StateOp::BoundedOr, {}, {}, 0, {}, std::move(vars), std::move(body));
}

StateF StateFormula::bounded_or(std::vector<std::string> vars, StateF body,
                                std::shared_ptr<const std::vector<SepSplitRow>> split) {
  auto f = make_state(StateOp::BoundedOr, {}, {}, 0, {}, std::move(vars),
                      std::move(body));
  const_cast<StateFormula&>(*f).sep_split = std::move(split);
  return f;
}

StateF StateFormula::conj_all(const std::vector<StateF>& fs) {
  if (fs.empty()) return tru();
  StateF out = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) out = conj(*it, out);
  return out;
}
StateF StateFormula::disj_all(const std::vector<StateF>& fs) {
  if (fs.empty()) return fals();
  StateF out = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) out = disj(*it, out);
  return out;
}

int cmp(const StateF& a, const StateF& b) {
  if (a.get() == b.get()) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (int c = cmp(a->lhs, b->lhs)) return c;
  if (int c = cmp(a->rhs, b->rhs)) return c;
  if (a->count != b->count) return a->count < b->count ? -1 : 1;
  if (int c = a->binder.compare(b->binder)) return c < 0 ? -1 : 1;
  if (a->binders != b->binders) return a->binders < b->binders ? -1 : 1;
  bool la = a->a != nullptr, lb = b->a != nullptr;
  if (la != lb) return la ? 1 : -1;
  if (la)
    if (int c = cmp(a->a, b->a)) return c;
  la = a->b != nullptr, lb = b->b != nullptr;
  if (la != lb) return la ? 1 : -1;
  if (la)
    if (int c = cmp(a->b, b->b)) return c;
  return 0;
}

bool equal(const StateF& a, const StateF& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return cmp(a, b) == 0;
}

namespace {

void fv_state(const StateF& f, std::set<std::string>& out,
              std::vector<std::string>& bound) {
  auto visible = [&](const std::string& x) {
    return std::find(bound.begin(), bound.end(), x) == bound.end();
  };
  auto add_term = [&](const Term& t) {
    if (t.is_var() && visible(t.name)) out.insert(t.name);
  };
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Emp:
      return;
    case StateOp::Eq:
    case StateOp::PointsTo:
    case StateOp::Hook:
    case StateOp::RPlus:
    case StateOp::Ls:
      add_term(f->lhs);
      add_term(f->rhs);
      return;
    case StateOp::Alloc:
    case StateOp::PredGeq:
    case StateOp::PredLeq:
    case StateOp::PredEq:
      add_term(f->lhs);
      return;
    case StateOp::Neg:
      fv_state(f->a, out, bound);
      return;
    case StateOp::Or:
    case StateOp::And:
    case StateOp::Implies:
    case StateOp::SepConj:
      fv_state(f->a, out, bound);
      fv_state(f->b, out, bound);
      return;
    case StateOp::Exists:
    case StateOp::Forall:
      bound.push_back(f->binder);
      fv_state(f->a, out, bound);
      bound.pop_back();
      return;
    case StateOp::BoundedOr: {
      for (const auto& v : f->binders) bound.push_back(v);
      fv_state(f->a, out, bound);
      bound.resize(bound.size() - f->binders.size());
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const StateF& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  fv_state(f, out, bound);
  return out;
}

bool mentions_var(const StateF& f, const std::string& x) {
  return free_vars(f).count(x) > 0;
}

namespace {

StateF subst_state(const StateF& f, const std::map<std::string, unsigned>& env,
                   bool do_fold);

StateF make_shared_pred(StateOp op, Term l, unsigned n) {
  switch (op) {
    case StateOp::PredGeq: return StateFormula::pred_geq(l, n);
    case StateOp::PredLeq: return StateFormula::pred_leq(l, n);
    default: return StateFormula::pred_eq(l, n);
  }
}

StateF rebuild2(const StateF& f, StateF a, StateF b) {
  if (a.get() == f->a.get() && b.get() == f->b.get()) return f;
  switch (f->op) {
    case StateOp::Neg: return StateFormula::neg(std::move(a));
    case StateOp::Or: return StateFormula::disj(std::move(a), std::move(b));
    case StateOp::And: return StateFormula::conj(std::move(a), std::move(b));
    case StateOp::Implies: return StateFormula::implies(std::move(a), std::move(b));
    case StateOp::SepConj: return StateFormula::sep(std::move(a), std::move(b));
    default: assert(false); return f;
  }
}

StateF fold_node(const StateF& f) {
  switch (f->op) {
    case StateOp::Eq:
      if (f->lhs.is_const() && f->rhs.is_const())
        return f->lhs.value == f->rhs.value ? StateFormula::tru() : StateFormula::fals();
      if (f->lhs.is_var() && f->rhs.is_var() && f->lhs.name == f->rhs.name)
        return StateFormula::tru();
      return f;
    case StateOp::Neg:
      if (f->a->op == StateOp::True) return StateFormula::fals();
      if (f->a->op == StateOp::False) return StateFormula::tru();
      if (f->a->op == StateOp::Neg) return f->a->a;
      return f;
    case StateOp::Or:
      if (f->a->op == StateOp::True || f->b->op == StateOp::True) return StateFormula::tru();
      if (f->a->op == StateOp::False) return f->b;
      if (f->b->op == StateOp::False) return f->a;
      return f;
    case StateOp::And:
      if (f->a->op == StateOp::False || f->b->op == StateOp::False) return StateFormula::fals();
      if (f->a->op == StateOp::True) return f->b;
      if (f->b->op == StateOp::True) return f->a;
      return f;
    case StateOp::Implies:
      if (f->a->op == StateOp::False || f->b->op == StateOp::True) return StateFormula::tru();
      if (f->a->op == StateOp::True) return f->b;
      return f;
    case StateOp::SepConj:
      // (false # x) has no heap split; true # true collapses
      if (f->a->op == StateOp::False || f->b->op == StateOp::False) return StateFormula::fals();
      if (f->a->op == StateOp::True && f->b->op == StateOp::True) return StateFormula::tru();
      return f;
    case StateOp::Exists:
    case StateOp::Forall:
      if (f->a->op == StateOp::True || f->a->op == StateOp::False) return f->a;
      return f;
    case StateOp::BoundedOr:
      if (f->a->op == StateOp::True || f->a->op == StateOp::False) return f->a;
      return f;
    default:
      return f;
  }
}

StateF subst_state(const StateF& f, const std::map<std::string, unsigned>& env,
                   bool do_fold) {
  auto sub_term = [&](const Term& t) -> Term {
    if (t.is_var()) {
      auto it = env.find(t.name);
      if (it != env.end()) return Term::constant(it->second);
    }
    return t;
  };
  auto finish = [&](StateF g) { return do_fold ? fold_node(g) : g; };
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Emp:
      return f;
    case StateOp::Eq: {
      Term l = sub_term(f->lhs), r = sub_term(f->rhs);
      if (l == f->lhs && r == f->rhs) return finish(f);
      return finish(StateFormula::eq(l, r));
    }
    case StateOp::PointsTo: {
      Term l = sub_term(f->lhs), r = sub_term(f->rhs);
      if (l == f->lhs && r == f->rhs) return f;
      return StateFormula::points_to(l, r);
    }
    case StateOp::Hook: {
      Term l = sub_term(f->lhs), r = sub_term(f->rhs);
      return (l == f->lhs && r == f->rhs) ? f : StateFormula::hook(l, r);
    }
    case StateOp::RPlus: {
      Term l = sub_term(f->lhs), r = sub_term(f->rhs);
      return (l == f->lhs && r == f->rhs) ? f : StateFormula::rplus(l, r);
    }
    case StateOp::Ls: {
      Term l = sub_term(f->lhs), r = sub_term(f->rhs);
      return (l == f->lhs && r == f->rhs) ? f : StateFormula::ls(l, r);
    }
    case StateOp::Alloc: {
      Term l = sub_term(f->lhs);
      return l == f->lhs ? f : StateFormula::alloc(l);
    }
    case StateOp::PredGeq:
    case StateOp::PredLeq:
    case StateOp::PredEq: {
      Term l = sub_term(f->lhs);
      if (l == f->lhs) return f;
      return make_shared_pred(f->op, l, f->count);
    }
    case StateOp::Neg: {
      StateF a = subst_state(f->a, env, do_fold);
      return finish(rebuild2(f, std::move(a), nullptr));
    }
    case StateOp::Or:
    case StateOp::And:
    case StateOp::Implies:
    case StateOp::SepConj: {
      StateF a = subst_state(f->a, env, do_fold);
      StateF b = subst_state(f->b, env, do_fold);
      return finish(rebuild2(f, std::move(a), std::move(b)));
    }
    case StateOp::Exists:
    case StateOp::Forall: {
      auto inner = env;
      inner.erase(f->binder);
      if (inner.empty()) return finish(f);
      StateF a = subst_state(f->a, inner, do_fold);
      if (a.get() == f->a.get()) return finish(f);
      StateF g = f->op == StateOp::Exists ? StateFormula::exists(f->binder, a)
                                          : StateFormula::forall(f->binder, a);
      return finish(g);
    }
    case StateOp::BoundedOr: {
      auto inner = env;
      for (const auto& v : f->binders) inner.erase(v);
      if (inner.empty()) return finish(f);
      StateF a = subst_state(f->a, inner, do_fold);
      if (a.get() == f->a.get()) return finish(f);
      // keep the split hint unless one of its variables is being replaced
      auto split = f->sep_split;
      if (split) {
        for (const auto& row : *split)
          if (inner.count(row.parent1) || inner.count(row.parent2)) {
            split = nullptr;
            break;
          }
      }
      StateF g = split ? StateFormula::bounded_or(f->binders, a, split)
                       : StateFormula::bounded_or(f->binders, a);
      return finish(g);
    }
  }
  return f;
}

}  // namespace

StateF substitute(const StateF& f, const std::string& x, unsigned v) {
  return subst_state(f, {{x, v}}, false);
}
StateF substitute(const StateF& f, const std::map<std::string, unsigned>& env) {
  return subst_state(f, env, false);
}
StateF fold_substitute(const StateF& f, const std::string& x, unsigned v) {
  return subst_state(f, {{x, v}}, true);
}

StateF fold(const StateF& f) {
  switch (f->op) {
    case StateOp::Neg: {
      StateF a = fold(f->a);
      return fold_node(a.get() == f->a.get() ? f : StateFormula::neg(a));
    }
    case StateOp::Or:
    case StateOp::And:
    case StateOp::Implies:
    case StateOp::SepConj: {
      StateF a = fold(f->a), b = fold(f->b);
      return fold_node(rebuild2(f, std::move(a), std::move(b)));
    }
    case StateOp::Exists: {
      StateF a = fold(f->a);
      return fold_node(a.get() == f->a.get() ? f : StateFormula::exists(f->binder, a));
    }
    case StateOp::Forall: {
      StateF a = fold(f->a);
      return fold_node(a.get() == f->a.get() ? f : StateFormula::forall(f->binder, a));
    }
    case StateOp::BoundedOr: {
      StateF a = fold(f->a);
      if (a.get() == f->a.get()) return fold_node(f);
      StateF g = f->sep_split ? StateFormula::bounded_or(f->binders, a, f->sep_split)
                              : StateFormula::bounded_or(f->binders, a);
      return fold_node(g);
    }
    default:
      return fold_node(f);
  }
}

bool is_core_state(const StateF& f) {
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Eq:
    case StateOp::PointsTo:
      return true;
    case StateOp::Neg:
      return is_core_state(f->a);
    case StateOp::Or:
    case StateOp::And:
    case StateOp::SepConj:
      return is_core_state(f->a) && is_core_state(f->b);
    case StateOp::Exists:
      return is_core_state(f->a);
    default:
      return false;
  }
}

bool is_heap_free(const StateF& f) {
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Eq:
      return true;
    case StateOp::Neg:
      return is_heap_free(f->a);
    case StateOp::Or:
    case StateOp::And:
    case StateOp::Implies:
      return is_heap_free(f->a) && is_heap_free(f->b);
    case StateOp::BoundedOr:
      return is_heap_free(f->a);
    default:
      return false;
  }
}

bool contains_bounded_or(const StateF& f) {
  if (f->op == StateOp::BoundedOr) return true;
  if (f->a && contains_bounded_or(f->a)) return true;
  if (f->b && contains_bounded_or(f->b)) return true;
  return false;
}

namespace {

TempF make_temp(TempOp op, StateF state = nullptr, std::vector<TempF> kids = {},
                unsigned n = 0, int chop_tag = -1, std::vector<int> prj_tags = {},
                int star_a = -1, int star_b = -1, bool star_parity = false) {
  auto p = std::make_shared<TemporalFormula>();
  p->op = op;
  p->state = std::move(state);
  p->kids = std::move(kids);
  p->n = n;
  p->chop_tag = chop_tag;
  p->prj_tags = std::move(prj_tags);
  p->star_tag_a = star_a;
  p->star_tag_b = star_b;
  p->star_parity = star_parity;
  std::size_t h = 0xcbf29ce484222325ull + static_cast<std::size_t>(op);
  if (p->state) h = hash_combine(h, p->state->hash);
  for (const auto& k : p->kids) h = hash_combine(h, k->hash);
  h = hash_combine(h, p->n);
  h = hash_combine(h, static_cast<std::size_t>(p->chop_tag + 1));
  for (int t : p->prj_tags) h = hash_combine(h, static_cast<std::size_t>(t + 1));
  h = hash_combine(h, static_cast<std::size_t>(p->star_tag_a + 1));
  h = hash_combine(h, static_cast<std::size_t>(p->star_tag_b + 1));
  h = hash_combine(h, p->star_parity ? 2u : 1u);
  p->hash = h;
  return p;
}

}  // namespace

TempF TemporalFormula::lift(StateF s) {
  assert(s);
  return make_temp(TempOp::State, std::move(s));
}
TempF TemporalFormula::state_true() { return lift(StateFormula::tru()); }
TempF TemporalFormula::state_false() { return lift(StateFormula::fals()); }
TempF TemporalFormula::neg(TempF p) { return make_temp(TempOp::Neg, nullptr, {std::move(p)}); }
TempF TemporalFormula::disj(TempF l, TempF r) {
  return make_temp(TempOp::Or, nullptr, {std::move(l), std::move(r)});
}
TempF TemporalFormula::conj(TempF l, TempF r) {
  return make_temp(TempOp::And, nullptr, {std::move(l), std::move(r)});
}
TempF TemporalFormula::implies(TempF l, TempF r) {
  return make_temp(TempOp::Implies, nullptr, {std::move(l), std::move(r)});
}
TempF TemporalFormula::next(TempF p) { return make_temp(TempOp::Next, nullptr, {std::move(p)}); }
TempF TemporalFormula::next_n(unsigned n, TempF p) {
  return make_temp(TempOp::NextN, nullptr, {std::move(p)}, n);
}
TempF TemporalFormula::chop(TempF l, TempF r, int tag) {
  return make_temp(TempOp::Chop, nullptr, {std::move(l), std::move(r)}, 0, tag);
}
TempF TemporalFormula::empty() {
  static const TempF inst = make_temp(TempOp::Empty);
  return inst;
}
TempF TemporalFormula::prj(std::vector<TempF> pieces, TempF head, std::vector<int> tags) {
  assert(!pieces.empty());
  pieces.push_back(std::move(head));
  return make_temp(TempOp::Prj, nullptr, std::move(pieces), 0, -1, std::move(tags));
}
TempF TemporalFormula::star(TempF p) { return make_temp(TempOp::Star, nullptr, {std::move(p)}); }
TempF TemporalFormula::star_tagged(TempF p, int tag_a, int tag_b, bool parity) {
  return make_temp(TempOp::Star, nullptr, {std::move(p)}, 0, -1, {}, tag_a, tag_b, parity);
}
TempF TemporalFormula::plus(TempF p) { return make_temp(TempOp::Plus, nullptr, {std::move(p)}); }
TempF TemporalFormula::sometimes(TempF p) {
  return make_temp(TempOp::Sometimes, nullptr, {std::move(p)});
}
TempF TemporalFormula::always(TempF p) {
  return make_temp(TempOp::Always, nullptr, {std::move(p)});
}

int cmp(const TempF& a, const TempF& b) {
  if (a.get() == b.get()) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  bool sa = a->state != nullptr, sb = b->state != nullptr;
  if (sa != sb) return sa ? 1 : -1;
  if (sa)
    if (int c = cmp(a->state, b->state)) return c;
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (int c = cmp(a->kids[i], b->kids[i])) return c;
  if (a->n != b->n) return a->n < b->n ? -1 : 1;
  if (a->chop_tag != b->chop_tag) return a->chop_tag < b->chop_tag ? -1 : 1;
  if (a->prj_tags != b->prj_tags) return a->prj_tags < b->prj_tags ? -1 : 1;
  if (a->star_tag_a != b->star_tag_a) return a->star_tag_a < b->star_tag_a ? -1 : 1;
  if (a->star_tag_b != b->star_tag_b) return a->star_tag_b < b->star_tag_b ? -1 : 1;
  if (a->star_parity != b->star_parity) return a->star_parity ? 1 : -1;
  return 0;
}

bool equal(const TempF& a, const TempF& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return cmp(a, b) == 0;
}

std::set<std::string> free_vars(const TempF& p) {
  std::set<std::string> out;
  for (const auto& leaf : state_leaves(p)) {
    auto fv = free_vars(leaf);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

namespace {
void collect_leaves(const TempF& p, std::vector<StateF>& out) {
  if (p->op == TempOp::State) {
    out.push_back(p->state);
    return;
  }
  for (const auto& k : p->kids) collect_leaves(k, out);
}
}  // namespace

std::vector<StateF> state_leaves(const TempF& p) {
  std::vector<StateF> out;
  collect_leaves(p, out);
  return out;
}

bool is_restricted(const TempF& p) {
  for (const auto& leaf : state_leaves(p))
    if (!is_heap_free(leaf)) return false;
  return true;
}

namespace {
void max_const_state(const StateF& f, unsigned& m) {
  auto upd = [&](const Term& t) {
    if (t.is_const() && t.value > m) m = t.value;
  };
  upd(f->lhs);
  upd(f->rhs);
  if (f->op == StateOp::PredGeq || f->op == StateOp::PredLeq || f->op == StateOp::PredEq) {
    // the count bounds nothing location-valued
  }
  if (f->a) max_const_state(f->a, m);
  if (f->b) max_const_state(f->b, m);
}
}  // namespace

unsigned max_constant(const StateF& f) {
  unsigned m = 0;
  max_const_state(f, m);
  return m;
}

unsigned max_constant(const TempF& p) {
  unsigned m = 0;
  for (const auto& leaf : state_leaves(p)) m = std::max(m, max_constant(leaf));
  return m;
}

}  // namespace pptlsl
