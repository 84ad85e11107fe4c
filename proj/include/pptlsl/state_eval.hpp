#pragma once

#include "pptlsl/formula.hpp"
#include "pptlsl/memory.hpp"

namespace pptlsl {

// (I_s,I_h)[n] = n, (I_s,I_h)[x] = I_s(x); throws UnboundVariableError.
unsigned eval_term(const MemoryState& s, const Term& e);

// The |=_SL relation. Derived forms are expanded on the fly, so the
// function is total on well-formed input.
bool eval_state(const MemoryState& s, const StateF& f, const Config& cfg);

}  // namespace pptlsl
