#include "pptlsl/translate.hpp"

#include <algorithm>
#include <cassert>

#include "pptlsl/expand.hpp"

namespace pptlsl {

using SF = StateFormula;
using TF = TemporalFormula;

VarVector VarVector::reserved(std::size_t n, unsigned start_index) {
  VarVector v;
  v.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string base = std::string(kReservedPrefix) + std::to_string(start_index + i);
    v.pairs.emplace_back(base, base + "'");
  }
  return v;
}

std::vector<std::string> VarVector::names() const {
  std::vector<std::string> out;
  out.reserve(pairs.size() * 2);
  for (const auto& [a, b] : pairs) {
    out.push_back(a);
    out.push_back(b);
  }
  return out;
}

namespace {

unsigned size_core(const StateF& f) {
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Eq:
      return 0;
    case StateOp::PointsTo:
      return 1;
    case StateOp::Neg:
      return size_core(f->a);
    case StateOp::Or:
    case StateOp::And:
      return std::max(size_core(f->a), size_core(f->b));
    case StateOp::SepConj:
      return size_core(f->a) + size_core(f->b);
    case StateOp::Exists:
    case StateOp::BoundedOr:
      // expanding the quantifier into a Val-disjunction leaves the size
      // of each disjunct unchanged, so the max is the body's size
      return size_core(f->a);
    default:
      throw Error("size: formula not core-expanded");
  }
}

}  // namespace

unsigned size_of(const StateF& f, const Config& cfg) {
  return size_core(expand_derived(f, cfg));
}

unsigned vector_size(const TempF& p, const Config& cfg) {
  unsigned best = 1;
  for (const auto& leaf : state_leaves(expand_for_nf(p, cfg))) {
    unsigned n = size_core(leaf) + static_cast<unsigned>(free_vars(leaf).size());
    best = std::max(best, n);
  }
  return best;
}

StateF decompose(const VarVector& c, const VarVector& c1, const VarVector& c2) {
  if (c.size() != c1.size() || c.size() != c2.size())
    throw VectorLengthError("vector decomposition requires equal sizes: " +
                            std::to_string(c.size()) + ", " + std::to_string(c1.size()) +
                            ", " + std::to_string(c2.size()));
  std::vector<StateF> conjuncts;
  for (std::size_t i = 0; i < c.size(); ++i) {
    Term ci1 = Term::var(c.pairs[i].first), ci2 = Term::var(c.pairs[i].second);
    Term ai1 = Term::var(c1.pairs[i].first), ai2 = Term::var(c1.pairs[i].second);
    Term bi1 = Term::var(c2.pairs[i].first), bi2 = Term::var(c2.pairs[i].second);
    StateF left = SF::conj_all(
        {SF::eq(ai1, ci1), SF::eq(bi1, Term::constant(0)), SF::eq(ai2, ci2)});
    StateF right = SF::conj_all(
        {SF::eq(ai1, Term::constant(0)), SF::eq(bi1, ci1), SF::eq(bi2, ci2)});
    conjuncts.push_back(SF::disj(left, right));
  }
  return SF::conj_all(conjuncts);
}

namespace {

StateF f_rec(const StateF& f, const VarVector& c, const Config& cfg,
             TranslationContext& ctx) {
  switch (f->op) {
    case StateOp::True:
    case StateOp::False:
    case StateOp::Eq:
      return f;
    case StateOp::PointsTo: {
      std::vector<StateF> disjuncts;
      for (std::size_t i = 0; i < c.size(); ++i) {
        Term ci1 = Term::var(c.pairs[i].first), ci2 = Term::var(c.pairs[i].second);
        std::vector<StateF> parts;
        parts.push_back(SF::neg(SF::eq(ci1, Term::constant(0))));
        for (std::size_t j = 0; j < c.size(); ++j)
          if (j != i)
            parts.push_back(SF::eq(Term::var(c.pairs[j].first), Term::constant(0)));
        parts.push_back(SF::eq(ci1, f->lhs));
        parts.push_back(SF::eq(ci2, f->rhs));
        disjuncts.push_back(SF::conj_all(parts));
      }
      return SF::disj_all(disjuncts);
    }
    case StateOp::Neg:
      return SF::neg(f_rec(f->a, c, cfg, ctx));
    case StateOp::Or:
      return SF::disj(f_rec(f->a, c, cfg, ctx), f_rec(f->b, c, cfg, ctx));
    case StateOp::And:
      return SF::conj(f_rec(f->a, c, cfg, ctx), f_rec(f->b, c, cfg, ctx));
    case StateOp::SepConj: {
      VarVector c1 = ctx.fresh(c.size());
      VarVector c2 = ctx.fresh(c.size());
      StateF body = SF::conj(decompose(c, c1, c2),
                             SF::conj(f_rec(f->a, c1, cfg, ctx), f_rec(f->b, c2, cfg, ctx)));
      // binders interleaved per pair index: the decomposition clause for an
      // index resolves as soon as its four variables are assigned
      std::vector<std::string> binders;
      binders.reserve(c.size() * 4);
      auto rows = std::make_shared<std::vector<SepSplitRow>>();
      for (std::size_t i = 0; i < c.size(); ++i) {
        binders.push_back(c1.pairs[i].first);
        binders.push_back(c2.pairs[i].first);
        binders.push_back(c1.pairs[i].second);
        binders.push_back(c2.pairs[i].second);
        rows->push_back({c.pairs[i].first, c.pairs[i].second, c1.pairs[i].first,
                         c1.pairs[i].second, c2.pairs[i].first, c2.pairs[i].second});
      }
      return SF::bounded_or(std::move(binders), body, std::move(rows));
    }
    case StateOp::Exists: {
      StateF inner = f_rec(f->a, c, cfg, ctx);
      std::vector<StateF> disjuncts;
      for (unsigned v = 0; v <= cfg.max_loc; ++v)
        disjuncts.push_back(fold_substitute(inner, f->binder, v));
      return fold(SF::disj_all(disjuncts));
    }
    default:
      throw Error("f: formula not core-expanded");
  }
}

}  // namespace

FResult f_state(const StateF& f, const VarVector& c, const Config& cfg,
                TranslationContext& ctx) {
  auto fv_formula = free_vars(f);
  for (const auto& [a, b] : c.pairs)
    if (fv_formula.count(a) || fv_formula.count(b))
      throw Error("f: formula and vector variables must be disjoint");
  FResult r;
  r.truncated = c.size() < size_of(f, cfg) + fv_formula.size();
  r.formula = f_rec(expand_derived(f, cfg), c, cfg, ctx);
  return r;
}

TempF translate_F(const TempF& p, const VarVector& c, const Config& cfg,
                  TranslationContext& ctx) {
  switch (p->op) {
    case TempOp::State:
      return TF::lift(f_rec(expand_derived(p->state, cfg), c, cfg, ctx));
    case TempOp::Neg:
      return TF::neg(translate_F(p->kids[0], c, cfg, ctx));
    case TempOp::Or:
      return TF::disj(translate_F(p->kids[0], c, cfg, ctx),
                      translate_F(p->kids[1], c, cfg, ctx));
    case TempOp::And:
      return TF::conj(translate_F(p->kids[0], c, cfg, ctx),
                      translate_F(p->kids[1], c, cfg, ctx));
    case TempOp::Implies:
      return TF::implies(translate_F(p->kids[0], c, cfg, ctx),
                         translate_F(p->kids[1], c, cfg, ctx));
    case TempOp::Next:
      return TF::next(translate_F(p->kids[0], c, cfg, ctx));
    case TempOp::NextN:
      return TF::next_n(p->n, translate_F(p->kids[0], c, cfg, ctx));
    case TempOp::Empty:
      return p;
    case TempOp::Chop:
      return TF::chop(translate_F(p->kids[0], c, cfg, ctx),
                      translate_F(p->kids[1], c, cfg, ctx), p->chop_tag);
    case TempOp::Prj: {
      std::vector<TempF> pieces;
      for (std::size_t i = 0; i + 1 < p->kids.size(); ++i)
        pieces.push_back(translate_F(p->kids[i], c, cfg, ctx));
      TempF head = translate_F(p->kids.back(), c, cfg, ctx);
      return TF::prj(std::move(pieces), std::move(head), p->prj_tags);
    }
    case TempOp::Star:
      return TF::star_tagged(translate_F(p->kids[0], c, cfg, ctx), p->star_tag_a,
                             p->star_tag_b, p->star_parity);
    case TempOp::Plus:
      return TF::plus(translate_F(p->kids[0], c, cfg, ctx));
    case TempOp::Sometimes:
      return TF::sometimes(translate_F(p->kids[0], c, cfg, ctx));
    case TempOp::Always:
      return TF::always(translate_F(p->kids[0], c, cfg, ctx));
  }
  return p;
}

Interval encode_interval(const Interval& iv, const VarVector& c, const Config& cfg) {
  (void)cfg;
  Interval out;
  out.states.reserve(iv.states.size());
  for (const auto& s : iv.states) {
    if (s.heap.size() > c.size())
      throw HeapTooLargeError("heap with " + std::to_string(s.heap.size()) +
                              " cells does not fit a vector of size " +
                              std::to_string(c.size()));
    MemoryState enc;
    enc.stack = s.stack;
    std::size_t i = 0;
    for (const auto& [loc, val] : s.heap) {
      if (enc.stack.count(c.pairs[i].first) || enc.stack.count(c.pairs[i].second))
        throw Error("encode_interval: stack already binds a vector variable");
      enc.stack[c.pairs[i].first] = loc;
      enc.stack[c.pairs[i].second] = val;
      ++i;
    }
    for (; i < c.size(); ++i) {
      enc.stack[c.pairs[i].first] = 0;
      enc.stack[c.pairs[i].second] = 0;
    }
    out.states.push_back(enc);
  }
  return out;
}

StateF vh_validity(const VarVector& c) {
  std::vector<StateF> conjuncts;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      Term a = Term::var(c.pairs[i].first), b = Term::var(c.pairs[j].first);
      conjuncts.push_back(SF::disj(
          SF::eq(a, Term::constant(0)),
          SF::disj(SF::eq(b, Term::constant(0)), SF::neg(SF::eq(a, b)))));
    }
  return SF::conj_all(conjuncts);
}

}  // namespace pptlsl
