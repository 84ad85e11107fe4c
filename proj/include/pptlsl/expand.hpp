#pragma once

#include "pptlsl/formula.hpp"

namespace pptlsl {

// Rewrites every derived form to the core constructors:
//   state: e1~>e2, alloc, emp, cnt-predicates, rplus, ls, forall, ->
//   temporal: eps, chop, ^+, <>, [], X^n, &&, ->
// Fresh bound variables are minted deterministically and avoid capture.
StateF expand_derived(const StateF& f, const Config& cfg);
TempF expand_derived(const TempF& p, const Config& cfg);

// Same, but keeps chop and conjunction first-class at the temporal level
// (the normal-form algorithm cases on them directly).
TempF expand_for_nf(const TempF& p, const Config& cfg);

}  // namespace pptlsl
