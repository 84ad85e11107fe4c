#include "pptlsl/expand.hpp"

#include <cassert>

namespace pptlsl {

namespace {

using SF = StateFormula;
using TF = TemporalFormula;

struct ExpandCtx {
  std::set<std::string> taken;
  unsigned counter = 0;

  std::string fresh() {
    for (;;) {
      std::string name = "_v" + std::to_string(++counter);
      if (taken.insert(name).second) return name;
    }
  }
};

void collect_names(const StateF& f, std::set<std::string>& out) {
  if (f->lhs.is_var()) out.insert(f->lhs.name);
  if (f->rhs.is_var()) out.insert(f->rhs.name);
  if (!f->binder.empty()) out.insert(f->binder);
  for (const auto& v : f->binders) out.insert(v);
  if (f->a) collect_names(f->a, out);
  if (f->b) collect_names(f->b, out);
}

void collect_names(const TempF& p, std::set<std::string>& out) {
  if (p->state) collect_names(p->state, out);
  for (const auto& k : p->kids) collect_names(k, out);
}

StateF ex_state(const StateF& f, ExpandCtx& ctx);

// (exists y : y |-> e) # ... # (exists y : y |-> e) # true, n copies
StateF pred_chain(const Term& e, unsigned n, ExpandCtx& ctx) {
  StateF out = SF::tru();
  if (n == 0) return out;
  std::string y = ctx.fresh();
  for (unsigned i = 0; i < n; ++i)
    out = SF::sep(SF::exists(y, SF::points_to(Term::var(y), e)), out);
  return out;
}

StateF neq(const Term& a, const Term& b) { return SF::neg(SF::eq(a, b)); }

// cnt(e) == 0, the n = 0 instance of the cnt(e) == n pattern
StateF pred_zero(const Term& e, ExpandCtx& ctx) {
  return SF::conj(neq(e, Term::constant(0)), SF::neg(pred_chain(e, 1, ctx)));
}

StateF ex_alloc(const Term& e, ExpandCtx& ctx) {
  std::string x = ctx.fresh();
  return SF::exists(x, SF::sep(SF::points_to(e, Term::var(x)), SF::tru()));
}

StateF rplus_sugar(const Term& e1, const Term& e2, ExpandCtx& ctx) {
  std::string x = ctx.fresh();
  Term vx = Term::var(x);
  StateF c1 = SF::alloc(e1);
  StateF c2 = SF::implies(neq(e2, e1),
                          SF::conj(SF::neg(SF::alloc(e2)), SF::pred_eq(e1, 0)));
  StateF c3 = SF::forall(
      x, SF::implies(neq(vx, e2), SF::implies(SF::pred_eq(vx, 1), SF::alloc(vx))));
  StateF c4 = SF::forall(x, SF::implies(neq(vx, Term::constant(0)), SF::pred_leq(vx, 1)));
  return SF::conj(c1, SF::conj(c2, SF::conj(c3, c4)));
}

StateF ex_state(const StateF& f, ExpandCtx& ctx) {
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Eq:
    case StateOp::PointsTo:
      return f;
    case StateOp::Neg: {
      StateF a = ex_state(f->a, ctx);
      return a.get() == f->a.get() ? f : SF::neg(a);
    }
    case StateOp::Or:
    case StateOp::And:
    case StateOp::SepConj: {
      StateF a = ex_state(f->a, ctx);
      StateF b = ex_state(f->b, ctx);
      if (a.get() == f->a.get() && b.get() == f->b.get()) return f;
      if (f->op == StateOp::Or) return SF::disj(a, b);
      if (f->op == StateOp::And) return SF::conj(a, b);
      return SF::sep(a, b);
    }
    case StateOp::Implies:
      return SF::disj(SF::neg(ex_state(f->a, ctx)), ex_state(f->b, ctx));
    case StateOp::Exists: {
      StateF a = ex_state(f->a, ctx);
      return a.get() == f->a.get() ? f : SF::exists(f->binder, a);
    }
    case StateOp::Forall:
      return SF::neg(SF::exists(f->binder, SF::neg(ex_state(f->a, ctx))));
    case StateOp::Hook:
      return SF::sep(SF::points_to(f->lhs, f->rhs), SF::tru());
    case StateOp::Alloc:
      return ex_state(ex_alloc(f->lhs, ctx), ctx);
    case StateOp::Emp: {
      std::string x = ctx.fresh();
      return SF::neg(SF::exists(x, ex_state(ex_alloc(Term::var(x), ctx), ctx)));
    }
    case StateOp::PredGeq:
      return SF::conj(neq(f->lhs, Term::constant(0)), pred_chain(f->lhs, f->count, ctx));
    case StateOp::PredLeq:
      return SF::conj(neq(f->lhs, Term::constant(0)),
                      SF::neg(pred_chain(f->lhs, f->count + 1, ctx)));
    case StateOp::PredEq:
      if (f->count == 0) return pred_zero(f->lhs, ctx);
      return SF::conj(neq(f->lhs, Term::constant(0)),
                      SF::conj(pred_chain(f->lhs, f->count, ctx),
                               SF::neg(pred_chain(f->lhs, f->count + 1, ctx))));
    case StateOp::RPlus:
      return ex_state(rplus_sugar(f->lhs, f->rhs, ctx), ctx);
    case StateOp::Ls: {
      StateF seg = rplus_sugar(f->lhs, f->rhs, ctx);
      StateF precise = SF::neg(SF::sep(rplus_sugar(f->lhs, f->rhs, ctx), SF::neg(SF::emp())));
      return ex_state(SF::conj(seg, precise), ctx);
    }
    case StateOp::BoundedOr: {
      StateF a = ex_state(f->a, ctx);
      if (a.get() == f->a.get()) return f;
      if (f->sep_split) return SF::bounded_or(f->binders, a, f->sep_split);
      return SF::bounded_or(f->binders, a);
    }
  }
  return f;
}

TempF ex_temp(const TempF& p, ExpandCtx& ctx, bool keep_chop) {
  auto rec = [&](const TempF& q) { return ex_temp(q, ctx, keep_chop); };
  switch (p->op) {
    case TempOp::State: {
      StateF s = ex_state(p->state, ctx);
      return s.get() == p->state.get() ? p : TF::lift(s);
    }
    case TempOp::Neg:
      return TF::neg(rec(p->kids[0]));
    case TempOp::Or:
      return TF::disj(rec(p->kids[0]), rec(p->kids[1]));
    case TempOp::And: {
      TempF a = rec(p->kids[0]), b = rec(p->kids[1]);
      if (keep_chop) return TF::conj(a, b);
      return TF::neg(TF::disj(TF::neg(a), TF::neg(b)));
    }
    case TempOp::Implies:
      return TF::disj(TF::neg(rec(p->kids[0])), rec(p->kids[1]));
    case TempOp::Next:
      return TF::next(rec(p->kids[0]));
    case TempOp::NextN: {
      TempF q = rec(p->kids[0]);
      for (unsigned i = 0; i < p->n; ++i) q = TF::next(q);
      return q;
    }
    case TempOp::Empty:
      return TF::neg(TF::next(TF::state_true()));
    case TempOp::Chop: {
      TempF a = rec(p->kids[0]), b = rec(p->kids[1]);
      if (keep_chop) return TF::chop(a, b, p->chop_tag);
      return TF::prj({a, b}, TF::neg(TF::next(TF::state_true())));
    }
    case TempOp::Prj: {
      std::vector<TempF> kids;
      kids.reserve(p->kids.size());
      for (std::size_t i = 0; i + 1 < p->kids.size(); ++i) kids.push_back(rec(p->kids[i]));
      TempF head = rec(p->kids.back());
      return TF::prj(std::move(kids), std::move(head), p->prj_tags);
    }
    case TempOp::Star: {
      TempF body = rec(p->kids[0]);
      return TF::star_tagged(body, p->star_tag_a, p->star_tag_b, p->star_parity);
    }
    case TempOp::Plus: {
      TempF body = rec(p->kids[0]);
      TempF unfold = TF::chop(body, TF::star(body));
      if (keep_chop) return unfold;
      return ex_temp(unfold, ctx, keep_chop);
    }
    case TempOp::Sometimes: {
      TempF unfold = TF::chop(TF::state_true(), rec(p->kids[0]));
      if (keep_chop) return unfold;
      return ex_temp(unfold, ctx, keep_chop);
    }
    case TempOp::Always: {
      TempF body = rec(p->kids[0]);
      TempF unfold = TF::neg(TF::chop(TF::state_true(), TF::neg(body)));
      if (keep_chop) return unfold;
      return ex_temp(unfold, ctx, keep_chop);
    }
  }
  return p;
}

ExpandCtx make_ctx(const TempF& p) {
  ExpandCtx ctx;
  collect_names(p, ctx.taken);
  return ctx;
}

}  // namespace

StateF expand_derived(const StateF& f, const Config&) {
  ExpandCtx ctx;
  collect_names(f, ctx.taken);
  return ex_state(f, ctx);
}

TempF expand_derived(const TempF& p, const Config&) {
  ExpandCtx ctx = make_ctx(p);
  return ex_temp(p, ctx, /*keep_chop=*/false);
}

TempF expand_for_nf(const TempF& p, const Config&) {
  ExpandCtx ctx = make_ctx(p);
  return ex_temp(p, ctx, /*keep_chop=*/true);
}

}  // namespace pptlsl
