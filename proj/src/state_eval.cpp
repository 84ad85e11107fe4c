#include "pptlsl/state_eval.hpp"

#include <cassert>

#include "pptlsl/expand.hpp"

namespace pptlsl {

unsigned eval_term(const MemoryState& s, const Term& e) {
  if (e.is_const()) return e.value;
  auto it = s.stack.find(e.name);
  if (it == s.stack.end()) throw UnboundVariableError(e.name);
  return it->second;
}

namespace {

bool eval(const MemoryState& s, const StateF& f, const Config& cfg);

// ---- compiled heap-free evaluation ----
//
// BoundedOr bodies are heap-free, so the binder search runs over a flat,
// integer-indexed form of the body: variables become slots, nodes become a
// vector, and a branch is cut by a three-valued probe as soon as the partial
// assignment decides the body. Compiled forms are cached per node.

enum class Tri : uint8_t { False, True, Unknown };

constexpr int kUnassigned = -1;

struct Compiled {
  struct SplitRow {
    int p1, p2, l1, l2, r1, r2;  // slots
  };
  struct Node {
    StateOp op;
    int a = -1, b = -1;
    // Eq payload: slot >= 0 means variable, otherwise the literal value
    int lslot = -1, rslot = -1;
    unsigned lval = 0, rval = 0;
    int binder_begin = 0, binder_end = 0;  // BoundedOr slots
    int split_begin = -1, split_end = -1;  // separating-conjunction rows
  };
  std::vector<Node> nodes;
  std::vector<int> binder_slots;
  std::vector<SplitRow> split_rows;
  std::vector<std::string> slot_names;
  std::map<std::string, int> slot_of;
  int root = -1;

  int slot(const std::string& name) {
    auto it = slot_of.find(name);
    if (it != slot_of.end()) return it->second;
    int s = static_cast<int>(slot_names.size());
    slot_names.push_back(name);
    slot_of.emplace(name, s);
    return s;
  }

  int compile(const StateF& f) {
    Node n;
    n.op = f->op;
    switch (f->op) {
      case StateOp::True:
      case StateOp::False:
        break;
      case StateOp::Eq:
        if (f->lhs.is_const())
          n.lval = f->lhs.value;
        else
          n.lslot = slot(f->lhs.name);
        if (f->rhs.is_const())
          n.rval = f->rhs.value;
        else
          n.rslot = slot(f->rhs.name);
        break;
      case StateOp::Neg:
        n.a = compile(f->a);
        break;
      case StateOp::Or:
      case StateOp::And:
      case StateOp::Implies:
        n.a = compile(f->a);
        n.b = compile(f->b);
        break;
      case StateOp::BoundedOr: {
        n.binder_begin = static_cast<int>(binder_slots.size());
        for (const auto& v : f->binders) binder_slots.push_back(slot(v));
        n.binder_end = static_cast<int>(binder_slots.size());
        if (f->sep_split) {
          n.split_begin = static_cast<int>(split_rows.size());
          for (const auto& row : *f->sep_split)
            split_rows.push_back({slot(row.parent1), slot(row.parent2), slot(row.left1),
                                  slot(row.left2), slot(row.right1), slot(row.right2)});
          n.split_end = static_cast<int>(split_rows.size());
        }
        n.a = compile(f->a);
        break;
      }
      default:
        throw Error("heap-free evaluation expects a heap-free formula");
    }
    nodes.push_back(n);
    return static_cast<int>(nodes.size() - 1);
  }
};

using SlotEnv = std::vector<int>;

Tri eval3c(const Compiled& c, int i, const SlotEnv& env) {
  const Compiled::Node& n = c.nodes[i];
  switch (n.op) {
    case StateOp::True:
      return Tri::True;
    case StateOp::False:
      return Tri::False;
    case StateOp::Eq: {
      int a = n.lslot >= 0 ? env[n.lslot] : static_cast<int>(n.lval);
      if (a == kUnassigned) return Tri::Unknown;
      int b = n.rslot >= 0 ? env[n.rslot] : static_cast<int>(n.rval);
      if (b == kUnassigned) return Tri::Unknown;
      return a == b ? Tri::True : Tri::False;
    }
    case StateOp::Neg: {
      Tri t = eval3c(c, n.a, env);
      if (t == Tri::Unknown) return t;
      return t == Tri::True ? Tri::False : Tri::True;
    }
    case StateOp::Or: {
      Tri a = eval3c(c, n.a, env);
      if (a == Tri::True) return Tri::True;
      Tri b = eval3c(c, n.b, env);
      if (b == Tri::True) return Tri::True;
      return (a == Tri::False && b == Tri::False) ? Tri::False : Tri::Unknown;
    }
    case StateOp::And: {
      Tri a = eval3c(c, n.a, env);
      if (a == Tri::False) return Tri::False;
      Tri b = eval3c(c, n.b, env);
      if (b == Tri::False) return Tri::False;
      return (a == Tri::True && b == Tri::True) ? Tri::True : Tri::Unknown;
    }
    case StateOp::Implies: {
      Tri a = eval3c(c, n.a, env);
      if (a == Tri::False) return Tri::True;
      Tri b = eval3c(c, n.b, env);
      if (b == Tri::True) return Tri::True;
      return (a == Tri::True && b == Tri::False) ? Tri::False : Tri::Unknown;
    }
    case StateOp::BoundedOr:
      // a verdict independent of the binders stands
      return eval3c(c, n.a, env);
    default:
      return Tri::Unknown;
  }
}

bool eval_exact_c(const Compiled& c, int i, SlotEnv& env, const Config& cfg);
bool eval_bd_c(const Compiled& c, const Compiled::Node& bd, SlotEnv& env,
               const Config& cfg);

bool bd_search_c(const Compiled& c, const Compiled::Node& bd, int binder_idx, int body,
                 SlotEnv& env, const Config& cfg) {
  Tri probe = eval3c(c, body, env);
  if (probe != Tri::Unknown) return probe == Tri::True;
  if (binder_idx == bd.binder_end) return eval_exact_c(c, body, env, cfg);
  int slot = c.binder_slots[binder_idx];
  for (unsigned v = 0; v <= cfg.max_loc; ++v) {
    env[slot] = static_cast<int>(v);
    if (bd_search_c(c, bd, binder_idx + 1, body, env, cfg)) {
      env[slot] = kUnassigned;
      return true;
    }
  }
  env[slot] = kUnassigned;
  return false;
}

// With ground parent values the decomposition forces one of two assignments
// per index (the translation never reads a pair's second component when its
// first component is 0), so side choices enumerate all candidates.
bool bd_split_c(const Compiled& c, const Compiled::Node& bd, int row, int body,
                SlotEnv& env, const Config& cfg) {
  if (row == bd.split_end) {
    Tri probe = eval3c(c, body, env);
    if (probe != Tri::Unknown) return probe == Tri::True;
    return eval_exact_c(c, body, env, cfg);  // nested binders remain
  }
  const Compiled::SplitRow& r = c.split_rows[row];
  int p1 = env[r.p1], p2 = env[r.p2];
  auto try_side = [&](bool left) {
    env[r.l1] = left ? p1 : 0;
    env[r.l2] = left ? p2 : 0;
    env[r.r1] = left ? 0 : p1;
    env[r.r2] = left ? 0 : p2;
    bool ok = bd_split_c(c, bd, row + 1, body, env, cfg);
    env[r.l1] = env[r.l2] = env[r.r1] = env[r.r2] = kUnassigned;
    return ok;
  };
  if (try_side(true)) return true;
  // a dead parent pair lands on either side identically
  if (p1 != 0 && try_side(false)) return true;
  return false;
}

bool eval_bd_c(const Compiled& c, const Compiled::Node& bd, SlotEnv& env,
               const Config& cfg) {
  if (bd.split_begin >= 0) {
    bool parents_known = true;
    for (int i = bd.split_begin; i < bd.split_end && parents_known; ++i)
      parents_known = env[c.split_rows[i].p1] != kUnassigned &&
                      env[c.split_rows[i].p2] != kUnassigned;
    if (parents_known) return bd_split_c(c, bd, bd.split_begin, bd.a, env, cfg);
  }
  return bd_search_c(c, bd, bd.binder_begin, bd.a, env, cfg);
}

bool eval_exact_c(const Compiled& c, int i, SlotEnv& env, const Config& cfg) {
  const Compiled::Node& n = c.nodes[i];
  switch (n.op) {
    case StateOp::True:
      return true;
    case StateOp::False:
      return false;
    case StateOp::Eq: {
      int a = n.lslot >= 0 ? env[n.lslot] : static_cast<int>(n.lval);
      int b = n.rslot >= 0 ? env[n.rslot] : static_cast<int>(n.rval);
      if (a == kUnassigned)
        throw UnboundVariableError(c.slot_names[static_cast<std::size_t>(n.lslot)]);
      if (b == kUnassigned)
        throw UnboundVariableError(c.slot_names[static_cast<std::size_t>(n.rslot)]);
      return a == b;
    }
    case StateOp::Neg:
      return !eval_exact_c(c, n.a, env, cfg);
    case StateOp::Or:
      return eval_exact_c(c, n.a, env, cfg) || eval_exact_c(c, n.b, env, cfg);
    case StateOp::And:
      return eval_exact_c(c, n.a, env, cfg) && eval_exact_c(c, n.b, env, cfg);
    case StateOp::Implies:
      return !eval_exact_c(c, n.a, env, cfg) || eval_exact_c(c, n.b, env, cfg);
    case StateOp::BoundedOr:
      return eval_bd_c(c, n, env, cfg);
    default:
      throw Error("heap-free evaluation expects a heap-free formula");
  }
}

const Compiled& compiled_for(const StateF& f) {
  // the cached entry keeps the node alive so its address cannot be reused
  thread_local std::map<const StateFormula*, std::pair<StateF, std::shared_ptr<Compiled>>>
      cache;
  auto it = cache.find(f.get());
  if (it != cache.end()) return *it->second.second;
  auto c = std::make_shared<Compiled>();
  c->root = c->compile(f);
  auto [pos, _] = cache.emplace(f.get(), std::make_pair(f, std::move(c)));
  return *pos->second.second;
}

bool eval(const MemoryState& s, const StateF& f, const Config& cfg) {
  switch (f->op) {
    case StateOp::True:
      return true;
    case StateOp::False:
      return false;
    case StateOp::Eq:
      return eval_term(s, f->lhs) == eval_term(s, f->rhs);
    case StateOp::PointsTo: {
      unsigned addr = eval_term(s, f->lhs);
      return s.heap.size() == 1 && s.heap.begin()->first == addr &&
             s.heap.begin()->second == eval_term(s, f->rhs);
    }
    case StateOp::Neg:
      return !eval(s, f->a, cfg);
    case StateOp::Or:
      return eval(s, f->a, cfg) || eval(s, f->b, cfg);
    case StateOp::And:
      return eval(s, f->a, cfg) && eval(s, f->b, cfg);
    case StateOp::Implies:
      return !eval(s, f->a, cfg) || eval(s, f->b, cfg);
    case StateOp::SepConj: {
      std::vector<Heap::const_iterator> cells;
      for (auto it = s.heap.begin(); it != s.heap.end(); ++it) cells.push_back(it);
      std::size_t n = cells.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        MemoryState s1{s.stack, {}}, s2{s.stack, {}};
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (std::size_t{1} << i))
            s1.heap.insert(*cells[i]);
          else
            s2.heap.insert(*cells[i]);
        }
        if (eval(s1, f->a, cfg) && eval(s2, f->b, cfg)) return true;
      }
      return false;
    }
    case StateOp::Exists: {
      MemoryState ext = s;
      for (unsigned v = 0; v <= cfg.max_loc; ++v) {
        ext.stack[f->binder] = v;
        if (eval(ext, f->a, cfg)) return true;
      }
      return false;
    }
    case StateOp::BoundedOr: {
      const Compiled& c = compiled_for(f);
      SlotEnv env(c.slot_names.size(), kUnassigned);
      for (std::size_t slot = 0; slot < c.slot_names.size(); ++slot) {
        auto it = s.stack.find(c.slot_names[slot]);
        if (it != s.stack.end()) env[slot] = static_cast<int>(it->second);
      }
      // binder slots start unassigned even if the stack shadows them
      const Compiled::Node& root = c.nodes[static_cast<std::size_t>(c.root)];
      for (int bi = root.binder_begin; bi < root.binder_end; ++bi)
        env[c.binder_slots[bi]] = kUnassigned;
      return eval_bd_c(c, root, env, cfg);
    }
    default:
      // derived form: expand once and evaluate the core image
      return eval(s, expand_derived(f, cfg), cfg);
  }
}

}  // namespace

bool eval_state(const MemoryState& s, const StateF& f, const Config& cfg) {
  return eval(s, f, cfg);
}

}  // namespace pptlsl
