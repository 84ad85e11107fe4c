#include "pptlsl/memory.hpp"

#include <algorithm>

namespace pptlsl {

std::optional<Heap> vh(const ValueVector& c) {
  Heap h;
  for (const auto& [loc, val] : c.pairs) {
    if (loc == 0) continue;
    if (!h.emplace(loc, val).second) return std::nullopt;
  }
  return h;
}

namespace {

bool enum_heaps(const Config& cfg, unsigned heap_bound, const Stack& stack,
                const std::function<bool(const MemoryState&)>& fn) {
  // choose domains of size <= heap_bound in increasing lexicographic order
  unsigned cap = std::min<unsigned>(heap_bound, cfg.max_loc);
  std::vector<unsigned> dom;
  std::function<bool()> values_for = [&]() -> bool {
    std::vector<unsigned> vals(dom.size(), 0);
    for (;;) {
      MemoryState s;
      s.stack = stack;
      for (std::size_t i = 0; i < dom.size(); ++i) s.heap[dom[i]] = vals[i];
      if (!fn(s)) return false;
      std::size_t i = 0;
      for (; i < vals.size(); ++i) {
        if (vals[i] < cfg.max_loc) {
          ++vals[i];
          break;
        }
        vals[i] = 0;
      }
      if (i == vals.size()) return true;
    }
  };
  std::function<bool(unsigned)> pick = [&](unsigned next_loc) -> bool {
    if (!values_for()) return false;
    if (dom.size() == cap) return true;
    for (unsigned l = next_loc; l <= cfg.max_loc; ++l) {
      dom.push_back(l);
      bool keep = pick(l + 1);
      dom.pop_back();
      if (!keep) return false;
    }
    return true;
  };
  return pick(1);
}

}  // namespace

void enumerate_states(const std::set<std::string>& vars, const Config& cfg,
                      unsigned heap_bound,
                      const std::function<bool(const MemoryState&)>& fn) {
  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<unsigned> vals(vs.size(), 0);
  for (;;) {
    Stack st;
    for (std::size_t i = 0; i < vs.size(); ++i) st[vs[i]] = vals[i];
    if (!enum_heaps(cfg, heap_bound, st, fn)) return;
    std::size_t i = 0;
    for (; i < vals.size(); ++i) {
      if (vals[i] < cfg.max_loc) {
        ++vals[i];
        break;
      }
      vals[i] = 0;
    }
    if (i == vals.size()) return;
  }
}

std::vector<MemoryState> all_states(const std::set<std::string>& vars,
                                    const Config& cfg, unsigned heap_bound) {
  std::vector<MemoryState> out;
  enumerate_states(vars, cfg, heap_bound, [&](const MemoryState& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace pptlsl
