#include "pptlsl/nfg.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>

#include "pptlsl/printer.hpp"

namespace pptlsl {

std::vector<std::vector<std::size_t>> NormalFormGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (std::size_t i = 0; i < edges.size(); ++i) adj[edges[i].from].push_back(i);
  return adj;
}

std::set<int> active_labels(const TempF& p) {
  std::set<int> out;
  switch (p->op) {
    case TempOp::Chop: {
      if (p->chop_tag >= 0) out.insert(p->chop_tag);
      auto sub = active_labels(p->kids[0]);
      out.insert(sub.begin(), sub.end());
      return out;
    }
    case TempOp::Or:
    case TempOp::And: {
      for (const auto& k : p->kids) {
        auto sub = active_labels(k);
        out.insert(sub.begin(), sub.end());
      }
      return out;
    }
    case TempOp::Prj: {
      if (!p->prj_tags.empty() && p->prj_tags[0] >= 0) out.insert(p->prj_tags[0]);
      auto first = active_labels(p->kids[0]);
      out.insert(first.begin(), first.end());
      auto head = active_labels(p->kids.back());
      out.insert(head.begin(), head.end());
      return out;
    }
    default:
      // state leaves, negation, next, star and eps carry no live obligation
      return out;
  }
}

namespace {

struct TempLess {
  bool operator()(const TempF& a, const TempF& b) const { return cmp(a, b) < 0; }
};

class Builder {
 public:
  Builder(const VarVector& c, const Config& cfg, const DecisionOptions& opts)
      : c_(c), cfg_(cfg), opts_(opts), nf_ctx_(cfg, opts.nf), validity_(vh_validity(c)) {}

  NormalFormGraph build(const TempF& root_formula) {
    NormalFormGraph g;
    g.nodes.push_back(NFGNode{nullptr, {}, true});
    g.epsilon = 0;
    g.root = intern(g, root_formula);
    std::deque<NodeId> work{g.root};
    std::set<NodeId> expanded;
    while (!work.empty()) {
      NodeId id = work.front();
      work.pop_front();
      if (!expanded.insert(id).second) continue;
      const NormalForm& n = nf_ctx_.normal_form(g.nodes[id].formula);
      for (const auto& t : n.terminals)
        if (guard_sat(t)) g.edges.push_back({id, t, g.epsilon});
      for (const auto& f : n.futures) {
        if (!guard_sat(f.guard)) continue;
        NodeId to = intern(g, f.succ);
        g.edges.push_back({id, f.guard, to});
        if (!expanded.count(to)) work.push_back(to);
      }
    }
    return g;
  }

  std::optional<Stack> guard_model(const LiteralConj& guard) {
    return state_sat(StateFormula::conj(guard.to_formula(), validity_), cfg_);
  }

 private:
  NodeId intern(NormalFormGraph& g, const TempF& formula) {
    auto it = ids_.find(formula);
    if (it != ids_.end()) return it->second;
    if (g.nodes.size() > opts_.node_budget)
      throw BudgetExceededError("normal form graph exceeds the node budget");
    NodeId id = g.nodes.size();
    g.nodes.push_back(NFGNode{formula, active_labels(formula), false});
    ids_.emplace(formula, id);
    return id;
  }

  bool guard_sat(const LiteralConj& guard) {
    auto key = guard.key();
    auto it = sat_cache_.find(key);
    if (it != sat_cache_.end()) return it->second;
    bool sat = guard_model(guard).has_value();
    sat_cache_.emplace(std::move(key), sat);
    return sat;
  }

  const VarVector& c_;
  Config cfg_;
  DecisionOptions opts_;
  NfContext nf_ctx_;
  StateF validity_;
  std::map<TempF, NodeId, TempLess> ids_;
  std::map<std::string, bool> sat_cache_;
};

// all variables a witness state must bind: fv(P) plus the vector variables
std::vector<std::string> witness_vars(const TempF& p, const VarVector& c) {
  std::set<std::string> vars = free_vars(p);
  for (const auto& n : c.names()) vars.insert(n);
  return {vars.begin(), vars.end()};
}

Stack extend_model(const Stack& partial, const std::vector<std::string>& vars) {
  Stack out;
  for (const auto& v : vars) {
    auto it = partial.find(v);
    out[v] = it == partial.end() ? 0u : it->second;
  }
  return out;
}

// BFS path of edge indices from -> to; empty when from == to
std::optional<std::vector<std::size_t>> bfs_path(
    const NormalFormGraph& g, const std::vector<std::vector<std::size_t>>& adj,
    NodeId from, NodeId to, const std::set<NodeId>& allowed) {
  if (from == to) return std::vector<std::size_t>{};
  std::map<NodeId, std::size_t> via;
  std::deque<NodeId> q{from};
  std::set<NodeId> seen{from};
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop_front();
    for (std::size_t e : adj[v]) {
      NodeId w = g.edges[e].to;
      if (!allowed.empty() && !allowed.count(w)) continue;
      if (!seen.insert(w).second) continue;
      via[w] = e;
      if (w == to) {
        std::vector<std::size_t> path;
        NodeId cur = to;
        while (cur != from) {
          std::size_t pe = via[cur];
          path.push_back(pe);
          cur = g.edges[pe].from;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push_back(w);
    }
  }
  return std::nullopt;
}

// Tarjan strongly connected components
std::vector<std::vector<NodeId>> scc_of(const NormalFormGraph& g,
                                        const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<int> index(g.nodes.size(), -1), low(g.nodes.size(), 0);
  std::vector<bool> on_stack(g.nodes.size(), false);
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> sccs;
  int next = 0;
  std::function<void(NodeId)> strongconnect = [&](NodeId v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t e : adj[v]) {
      NodeId w = g.edges[e].to;
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<NodeId> comp;
      for (;;) {
        NodeId w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
        if (w == v) break;
      }
      sccs.push_back(std::move(comp));
    }
  };
  for (NodeId v = 0; v < g.nodes.size(); ++v)
    if (index[v] < 0) strongconnect(v);
  return sccs;
}

}  // namespace

NormalFormGraph build_nfg(const TempF& p, const VarVector& c, const Config& cfg,
                          const DecisionOptions& opts) {
  Builder b(c, cfg, opts);
  return b.build(prepare_restricted(p, c, cfg));
}

DecisionResult decide_sat(const TempF& p, const VarVector& c, const Config& cfg,
                          const DecisionOptions& opts) {
  DecisionResult res;
  Builder b(c, cfg, opts);
  try {
    res.graph = b.build(prepare_restricted(p, c, cfg));
  } catch (const BudgetExceededError& e) {
    res.verdict = Verdict::Unknown;
    res.note = e.what();
    return res;
  }
  const NormalFormGraph& g = res.graph;
  auto adj = g.adjacency();
  auto vars = witness_vars(p, c);
  auto edge_state = [&](std::size_t e) {
    auto model = b.guard_model(g.edges[e].guard);
    if (!model) throw Error("internal: surviving edge has an unsatisfiable guard");
    return extend_model(*model, vars);
  };

  // finite models first: a root-to-epsilon path
  if (auto path = bfs_path(g, adj, g.root, g.epsilon, {})) {
    ModelWitness w;
    w.kind = ModelWitness::Kind::Finite;
    for (std::size_t e : *path) w.states.push_back(edge_state(e));
    res.verdict = Verdict::Sat;
    res.witness = std::move(w);
    return res;
  }

  // infinite models: a reachable component whose closed walk drops every label
  std::set<NodeId> reachable;
  {
    std::deque<NodeId> q{g.root};
    reachable.insert(g.root);
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop_front();
      for (std::size_t e : adj[v])
        if (reachable.insert(g.edges[e].to).second) q.push_back(g.edges[e].to);
    }
  }
  for (const auto& comp : scc_of(g, adj)) {
    if (!reachable.count(comp[0]) || comp[0] == g.epsilon) continue;
    std::set<NodeId> members(comp.begin(), comp.end());
    bool has_internal_edge = false;
    for (NodeId v : comp)
      for (std::size_t e : adj[v])
        if (members.count(g.edges[e].to)) has_internal_edge = true;
    if (!has_internal_edge) continue;
    // for every label, some member must lack it
    std::set<int> all_labels;
    for (NodeId v : comp)
      all_labels.insert(g.nodes[v].labels.begin(), g.nodes[v].labels.end());
    bool accepted = true;
    for (int l : all_labels) {
      bool dropped = false;
      for (NodeId v : comp)
        if (!g.nodes[v].labels.count(l)) {
          dropped = true;
          break;
        }
      if (!dropped) {
        accepted = false;
        break;
      }
    }
    if (!accepted) continue;
    // closed walk visiting every member, so each label is dropped on-cycle
    std::vector<std::size_t> cycle_edges;
    bool ok = true;
    if (comp.size() == 1) {
      // the internal edge is a self-loop
      ok = false;
      for (std::size_t e : adj[comp[0]])
        if (g.edges[e].to == comp[0]) {
          cycle_edges.push_back(e);
          ok = true;
          break;
        }
    } else {
      for (std::size_t i = 0; i < comp.size() && ok; ++i) {
        NodeId a = comp[i], bnode = comp[(i + 1) % comp.size()];
        auto leg = bfs_path(g, adj, a, bnode, members);
        if (!leg || leg->empty()) {
          ok = false;
        } else {
          cycle_edges.insert(cycle_edges.end(), leg->begin(), leg->end());
        }
      }
    }
    if (!ok || cycle_edges.empty()) continue;
    auto prefix = bfs_path(g, adj, g.root, comp[0], {});
    if (!prefix) continue;
    ModelWitness w;
    w.kind = ModelWitness::Kind::Lasso;
    for (std::size_t e : *prefix) w.states.push_back(edge_state(e));
    for (std::size_t e : cycle_edges) w.cycle.push_back(edge_state(e));
    res.verdict = Verdict::Sat;
    res.witness = std::move(w);
    return res;
  }

  res.verdict = Verdict::Unsat;
  return res;
}

Interval decode_states(const std::vector<Stack>& states, const VarVector& c) {
  Interval out;
  std::set<std::string> cvars;
  for (const auto& n : c.names()) cvars.insert(n);
  for (const auto& st : states) {
    ValueVector vec;
    for (const auto& [hi, lo] : c.pairs) {
      auto f = st.find(hi);
      auto s = st.find(lo);
      vec.pairs.emplace_back(f == st.end() ? 0u : f->second,
                             s == st.end() ? 0u : s->second);
    }
    auto heap = vh(vec);
    if (!heap)
      throw InvalidVectorError("witness state decodes to an invalid heap vector");
    MemoryState m;
    m.heap = *heap;
    for (const auto& [k, v] : st)
      if (!cvars.count(k)) m.stack[k] = v;
    out.states.push_back(std::move(m));
  }
  return out;
}

Interval decode_model(const ModelWitness& w, const VarVector& c, const Config&) {
  if (w.kind != ModelWitness::Kind::Finite)
    throw Error("decode_model: finite witnesses only; decode lasso parts separately");
  return decode_states(w.states, c);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

}  // namespace

std::string to_dot(const NormalFormGraph& g) {
  std::ostringstream os;
  os << "digraph nfg {\n";
  os << "  rankdir=LR;\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const NFGNode& n = g.nodes[i];
    os << "  n" << i << " [label=\"";
    if (n.is_epsilon) {
      os << "eps";
    } else {
      os << dot_escape(to_string(n.formula));
      if (!n.labels.empty()) {
        os << "\\nL={";
        bool first = true;
        for (int l : n.labels) {
          if (!first) os << ",";
          os << l;
          first = false;
        }
        os << "}";
      }
    }
    os << "\"";
    if (i == g.root) os << ", shape=box";
    os << "];\n";
  }
  for (const auto& e : g.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [label=\""
       << dot_escape(to_string(e.guard.to_formula())) << "\", fontcolor=red];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pptlsl
