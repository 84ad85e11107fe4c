#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pptlsl/formula.hpp"

namespace pptlsl {

using Stack = std::map<std::string, unsigned>;
using Heap = std::map<unsigned, unsigned>;  // Loc -> Val; 0 never a key

// One interval state: (I_s, I_h).
struct MemoryState {
  Stack stack;
  Heap heap;

  friend bool operator==(const MemoryState& a, const MemoryState& b) {
    return a.stack == b.stack && a.heap == b.heap;
  }
  friend bool operator<(const MemoryState& a, const MemoryState& b) {
    if (a.stack != b.stack) return a.stack < b.stack;
    return a.heap < b.heap;
  }
};

// A vector c of value pairs; pair i is a live cell iff first component != 0.
struct ValueVector {
  std::vector<std::pair<unsigned, unsigned>> pairs;
};

// Decodes c into a heap; nullopt when two live pairs share a location.
std::optional<Heap> vh(const ValueVector& c);

// All (I_s, I_h) with dom(I_s) = vars, values in Val, |dom(I_h)| <= heap_bound,
// dom(I_h) in Loc. The callback returns false to stop early.
void enumerate_states(const std::set<std::string>& vars, const Config& cfg,
                      unsigned heap_bound,
                      const std::function<bool(const MemoryState&)>& fn);

std::vector<MemoryState> all_states(const std::set<std::string>& vars,
                                    const Config& cfg, unsigned heap_bound);

}  // namespace pptlsl
