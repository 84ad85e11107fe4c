#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pptlsl/formula.hpp"
#include "pptlsl/interval.hpp"
#include "pptlsl/normal_form.hpp"
#include "pptlsl/translate.hpp"

namespace pptlsl {

struct InvalidVectorError : Error {
  using Error::Error;
};

using NodeId = std::size_t;

struct NFGNode {
  TempF formula;          // null for the epsilon node
  std::set<int> labels;   // finiteness labels active at this node
  bool is_epsilon = false;
};

struct NFGEdge {
  NodeId from;
  LiteralConj guard;
  NodeId to;
};

struct NormalFormGraph {
  std::vector<NFGNode> nodes;
  std::vector<NFGEdge> edges;
  NodeId root = 0;
  NodeId epsilon = 0;

  std::vector<std::vector<std::size_t>> adjacency() const;
};

struct DecisionOptions {
  unsigned node_budget = 100000;
  NfOptions nf;
};

// Finiteness labels active in a formula: a chop's label while its left
// component runs, the first piece and head of a projection, nothing under
// negation or next (obligations there are dormant or absent).
std::set<int> active_labels(const TempF& p);

// Worklist construction: root = F(P, C); one edge per normal-form clause,
// unsatisfiable guards pruned. Satisfiability is taken over vh-valid states,
// matching the encoded-interval model space.
NormalFormGraph build_nfg(const TempF& p, const VarVector& c, const Config& cfg,
                          const DecisionOptions& opts = {});

struct ModelWitness {
  enum class Kind { Finite, Lasso } kind = Kind::Finite;
  std::vector<Stack> states;  // finite model, or the lasso prefix
  std::vector<Stack> cycle;   // lasso only, nonempty
};

enum class Verdict { Sat, Unsat, Unknown };

struct DecisionResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<ModelWitness> witness;
  NormalFormGraph graph;
  std::string note;
};

// Sat iff the epsilon node is reachable (finite model) or some reachable
// cycle drops every label somewhere along it (infinite model).
DecisionResult decide_sat(const TempF& p, const VarVector& c, const Config& cfg,
                          const DecisionOptions& opts = {});

// Re-materializes heaps from the C-variable values via vh and strips the
// vector variables from the stacks. Throws InvalidVectorError if a state
// violates vh-validity (an internal soundness bug, never repaired silently).
Interval decode_states(const std::vector<Stack>& states, const VarVector& c);
Interval decode_model(const ModelWitness& w, const VarVector& c, const Config& cfg);

std::string to_dot(const NormalFormGraph& g);

}  // namespace pptlsl
