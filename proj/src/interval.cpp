#include "pptlsl/interval.hpp"

#include <cassert>
#include <unordered_map>

#include "pptlsl/state_eval.hpp"

namespace pptlsl {

std::vector<MemoryState> project(const Interval& iv, const std::vector<std::size_t>& rs) {
  std::vector<MemoryState> out;
  std::size_t prev = 0;
  bool first = true;
  for (std::size_t r : rs) {
    if (r > iv.length())
      throw IndexOutOfRangeError("projection index " + std::to_string(r) +
                                 " exceeds interval length " + std::to_string(iv.length()));
    if (!first && r < prev)
      throw NonMonotoneError("projection indices must be non-decreasing");
    if (first || r > prev) out.push_back(iv.states[r]);
    prev = r;
    first = false;
  }
  return out;
}

namespace {

struct Key {
  const TemporalFormula* node;
  std::size_t k, j;
  bool operator==(const Key& o) const { return node == o.node && k == o.k && j == o.j; }
};

struct KeyHash {
  std::size_t operator()(const Key& key) const {
    std::size_t h = std::hash<const void*>{}(key.node);
    h ^= key.k * 0x9e3779b97f4a7c15ull + (h << 6);
    h ^= key.j * 0xc2b2ae3d27d4eb4full + (h >> 3);
    return h;
  }
};

class Evaluator {
 public:
  Evaluator(const Interval& iv, const Config& cfg) : iv_(iv), cfg_(cfg) {}

  bool eval(std::size_t k, std::size_t j, const TempF& p) {
    assert(k <= j && j <= iv_.length());
    Key key{p.get(), k, j};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool r = compute(k, j, p);
    memo_.emplace(key, r);
    return r;
  }

 private:
  bool star(std::size_t k, std::size_t j, const TempF& star_node) {
    // point intervals satisfy P* (the n = 0 decomposition); otherwise some
    // strictly advancing first piece exists, stutter pieces being removable
    if (k == j) return true;
    Key key{star_node.get(), k, j};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    memo_.emplace(key, false);  // cycle guard while searching
    const TempF& body = star_node->kids[0];
    bool result = false;
    for (std::size_t r = k + 1; r <= j && !result; ++r)
      result = eval(k, r, body) && star(r, j, star_node);
    memo_[key] = result;
    return result;
  }

  bool prj_search(std::size_t k, std::size_t j, const std::vector<TempF>& kids,
                  std::size_t l, std::vector<std::size_t>& cuts) {
    const std::size_t m = kids.size() - 1;
    if (l == m) {
      std::size_t rm = cuts.back();
      const TempF& head = kids[m];
      if (rm == j) {
        // case (b): head over a projected prefix r_0..r_h
        for (std::size_t h = 0; h <= m; ++h) {
          std::vector<std::size_t> prefix(cuts.begin(), cuts.begin() + h + 1);
          Interval proj(project(iv_, prefix));
          if (models(proj, head, cfg_)) return true;
        }
        return false;
      }
      // case (a): projected cuts followed by the remaining suffix
      std::vector<MemoryState> ss = project(iv_, cuts);
      for (std::size_t t = rm + 1; t <= j; ++t) ss.push_back(iv_.states[t]);
      Interval glued(std::move(ss));
      return models(glued, head, cfg_);
    }
    for (std::size_t r = cuts.back(); r <= j; ++r) {
      if (!eval(cuts.back(), r, kids[l])) continue;
      cuts.push_back(r);
      bool ok = prj_search(k, j, kids, l + 1, cuts);
      cuts.pop_back();
      if (ok) return true;
    }
    return false;
  }

  bool compute(std::size_t k, std::size_t j, const TempF& p) {
    switch (p->op) {
      case TempOp::State:
        return eval_state(iv_.states[k], p->state, cfg_);
      case TempOp::Neg:
        return !eval(k, j, p->kids[0]);
      case TempOp::Or:
        return eval(k, j, p->kids[0]) || eval(k, j, p->kids[1]);
      case TempOp::And:
        return eval(k, j, p->kids[0]) && eval(k, j, p->kids[1]);
      case TempOp::Implies:
        return !eval(k, j, p->kids[0]) || eval(k, j, p->kids[1]);
      case TempOp::Next:
        return k < j && eval(k + 1, j, p->kids[0]);
      case TempOp::NextN:
        return k + p->n <= j && eval(k + p->n, j, p->kids[0]);
      case TempOp::Empty:
        return k == j;
      case TempOp::Chop: {
        for (std::size_t r = k; r <= j; ++r)
          if (eval(k, r, p->kids[0]) && eval(r, j, p->kids[1])) return true;
        return false;
      }
      case TempOp::Sometimes: {
        for (std::size_t r = k; r <= j; ++r)
          if (eval(r, j, p->kids[0])) return true;
        return false;
      }
      case TempOp::Always: {
        for (std::size_t r = k; r <= j; ++r)
          if (!eval(r, j, p->kids[0])) return false;
        return true;
      }
      case TempOp::Star:
        return star(k, j, p);
      case TempOp::Plus: {
        for (std::size_t r = k; r <= j; ++r)
          if (eval(k, r, p->kids[0]) && star_of(p, r, j)) return true;
        return false;
      }
      case TempOp::Prj: {
        std::vector<std::size_t> cuts{k};
        return prj_search(k, j, p->kids, 0, cuts);
      }
    }
    return false;
  }

  bool star_of(const TempF& plus_node, std::size_t k, std::size_t j) {
    auto it = star_cache_.find(plus_node.get());
    if (it == star_cache_.end())
      it = star_cache_.emplace(plus_node.get(), TemporalFormula::star(plus_node->kids[0])).first;
    return star(k, j, it->second);
  }

  const Interval& iv_;
  Config cfg_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::unordered_map<const TemporalFormula*, TempF> star_cache_;
};

}  // namespace

bool eval_interval(const Interval& iv, std::size_t k, std::size_t j, const TempF& p,
                   const Config& cfg) {
  if (iv.states.empty()) throw Error("eval_interval: empty interval");
  if (k > j || j > iv.length()) throw IndexOutOfRangeError("bad interpretation indices");
  Evaluator ev(iv, cfg);
  return ev.eval(k, j, p);
}

bool models(const Interval& iv, const TempF& p, const Config& cfg) {
  return eval_interval(iv, 0, iv.length(), p, cfg);
}

}  // namespace pptlsl
