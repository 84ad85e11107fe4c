#pragma once

#include <vector>

#include "pptlsl/formula.hpp"
#include "pptlsl/memory.hpp"

namespace pptlsl {

struct IndexOutOfRangeError : Error {
  using Error::Error;
};
struct NonMonotoneError : Error {
  using Error::Error;
};

// A nonempty finite sequence of states; length = state count - 1.
struct Interval {
  std::vector<MemoryState> states;

  Interval() = default;
  explicit Interval(std::vector<MemoryState> ss) : states(std::move(ss)) {}

  std::size_t length() const { return states.size() - 1; }
};

// sigma  (r_1,...,r_h): deletes duplicates, keeping the strictly increasing
// subsequence. Requires 0 <= r_1 <= ... <= r_h <= |sigma|; the empty index
// list yields the empty sequence.
std::vector<MemoryState> project(const Interval& iv, const std::vector<std::size_t>& rs);

// Finite-interval reference semantics: (sigma, k, j) |= P with all clauses
// applied literally; chop, <>, [], ^+ and X^n are evaluated through their own
// clauses so the derived-form laws can be checked against the prj encoding.
bool eval_interval(const Interval& iv, std::size_t k, std::size_t j, const TempF& p,
                   const Config& cfg);

// sigma |= P, i.e. (sigma, 0, |sigma|) |= P.
bool models(const Interval& iv, const TempF& p, const Config& cfg);

}  // namespace pptlsl
