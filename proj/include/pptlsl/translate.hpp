#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pptlsl/formula.hpp"
#include "pptlsl/interval.hpp"

namespace pptlsl {

struct VectorLengthError : Error {
  using Error::Error;
};
struct HeapTooLargeError : Error {
  using Error::Error;
};

// The variable vector C: n pairs of distinct identifiers from the reserved
// "$h" namespace (or caller-chosen names in tests).
struct VarVector {
  std::vector<std::pair<std::string, std::string>> pairs;

  std::size_t size() const { return pairs.size(); }
  // ($h<k>, $h<k>'), ..., ($h<k+n-1>, $h<k+n-1>')
  static VarVector reserved(std::size_t n, unsigned start_index = 1);

  std::vector<std::string> names() const;
};

// Counter for fresh vectors; pass one per translation for determinism.
struct TranslationContext {
  unsigned next_index = 1;

  VarVector fresh(std::size_t n) {
    VarVector v = VarVector::reserved(n, next_index);
    next_index += static_cast<unsigned>(n);
    return v;
  }
};

// |phi| per the size table; derived forms are expanded first, and the
// quantifier case follows the Val-disjunction reading (|exists x:phi| = |phi|).
unsigned size_of(const StateF& f, const Config& cfg);

// |C|_P = max over maximal state subformulas of |phi| + |fv(phi)|, floored
// at one so C is always well-formed.
unsigned vector_size(const TempF& p, const Config& cfg);

// C = C' (#) C'' as displayed in the vector-decomposition definition.
StateF decompose(const VarVector& c, const VarVector& c1, const VarVector& c2);

// Result of f: heap-free, plus a truncation flag raised when
// |C| < |phi| + |fv(phi)| (the formula may then be unsatisfiable by
// truncation rather than by content).
struct FResult {
  StateF formula;
  bool truncated = false;
};

// The recursive state translation f(phi, C); phi must be core (expand first).
FResult f_state(const StateF& f, const VarVector& c, const Config& cfg,
                TranslationContext& ctx);

// The full translation F: homomorphic on the temporal skeleton (derived
// temporal operators included), f at every state leaf, one shared C.
TempF translate_F(const TempF& p, const VarVector& c, const Config& cfg,
                  TranslationContext& ctx);

// Folds each heap into stack bindings of C via the canonical packing (live
// cells in ascending location order, (0,0) padding); heaps become empty.
Interval encode_interval(const Interval& iv, const VarVector& c, const Config& cfg);

// States whose C-part decodes through vh: no two live pairs share a location.
StateF vh_validity(const VarVector& c);

}  // namespace pptlsl
