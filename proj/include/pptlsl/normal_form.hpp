#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pptlsl/formula.hpp"
#include "pptlsl/memory.hpp"
#include "pptlsl/translate.hpp"

namespace pptlsl {

struct BudgetExceededError : Error {
  using Error::Error;
};
struct IncompleteInputError : Error {
  using Error::Error;
};

// Canonical equation atom: terms ordered (constants first).
struct EqAtom {
  Term l, r;
  static EqAtom make(Term a, Term b);
  StateF to_formula() const { return StateFormula::eq(l, r); }
};
int cmp(const EqAtom& a, const EqAtom& b);

struct Literal {
  EqAtom atom;
  bool pos = true;
};
int cmp(const Literal& a, const Literal& b);

// Sorted, deduplicated conjunction of equation literals; empty means true.
// Construction fails on a syntactic contradiction (same atom both signs, or
// one variable pinned to two constants).
class LiteralConj {
 public:
  const std::vector<Literal>& literals() const { return lits_; }
  bool is_true() const { return lits_.empty(); }

  static std::optional<LiteralConj> make(std::vector<Literal> lits);
  std::optional<LiteralConj> conjoin(const LiteralConj& other) const;

  StateF to_formula() const;
  std::string key() const;

  friend bool operator==(const LiteralConj& a, const LiteralConj& b) {
    return a.lits_ == b.lits_;
  }

 private:
  std::vector<Literal> lits_;
};

inline bool operator==(const Literal& a, const Literal& b) {
  return cmp(a, b) == 0;
}

using Dnf = std::vector<LiteralConj>;

// Equivalent disjunctive normal form of a heap-free state formula. Subtrees
// containing a BoundedOr binder are expanded by enumerating assignments of
// their free variables; everything else distributes syntactically.
Dnf dnf(const StateF& f, const Config& cfg);

// Exact satisfiability over the finite Val: a witness assignment of the free
// variables, or nullopt.
std::optional<Stack> state_sat(const StateF& f, const Config& cfg);

// Canonical form for node identity: double negation folded, constants folded,
// De Morgan pushed to the temporal core, or/and lists flattened, sorted and
// deduplicated, true/false absorbed.
TempF canon(const TempF& p);
StateF canon_state(const StateF& f);

// Deterministic pre-order tag assignment to chop/prj/star nodes.
TempF assign_tags(const TempF& p, int& next_tag);

struct NFClause {
  LiteralConj guard;
  TempF succ;
};

// The displayed shape:  \/ (P_e /\ eps)  \/  \/ (P_c /\ X P').
struct NormalForm {
  std::vector<LiteralConj> terminals;
  std::vector<NFClause> futures;

  void normalize();  // sort + dedupe, drop false successors
  bool is_false() const { return terminals.empty() && futures.empty(); }
};

// Reassembles the displayed disjunction as a formula (for oracle checks).
TempF reassemble(const NormalForm& n);

struct NfOptions {
  unsigned max_conf_atoms = 20;
  unsigned max_nodes = 100000;
};

class NfContext {
 public:
  NfContext(const Config& cfg, const NfOptions& opts = {}) : cfg_(cfg), opts_(opts) {}

  const Config& cfg() const { return cfg_; }
  const NfOptions& options() const { return opts_; }

  // Normal form of a canonical, tagged, restricted formula; memoized.
  const NormalForm& normal_form(const TempF& canonical);

 private:
  NormalForm compute(const TempF& p);
  NormalForm nf_state(const StateF& s);
  NormalForm nf_neg(const TempF& inner);
  NormalForm nf_and(const TempF& a, const TempF& b);
  NormalForm nf_chop(const TempF& a, const TempF& b, int tag);
  NormalForm nf_star(const TempF& star_node);
  NormalForm nf_prj(const std::vector<TempF>& kids, const std::vector<int>& tags);
  NormalForm prj_rec(const std::vector<TempF>& pieces, std::size_t from,
                     const TempF& head, const std::vector<int>& tags);

  struct FormulaLess {
    bool operator()(const TempF& a, const TempF& b) const { return cmp(a, b) < 0; }
  };

  Config cfg_;
  NfOptions opts_;
  std::map<TempF, NormalForm, FormulaLess> memo_;
};

// Complete normal form: one row per consistent minterm over the occurring
// atoms; absent successors are false, absent terminals are marked.
struct CompleteNormalForm {
  std::vector<EqAtom> atoms;
  struct Row {
    LiteralConj guard;
    bool terminal = false;
    TempF succ;  // State(false) when no future clause applies
  };
  std::vector<Row> rows;
};

CompleteNormalForm conf_rows(const NormalForm& n, NfContext& ctx);
// Materialized complete normal form (keeps X false rows, as completion).
NormalForm conf(const NormalForm& n, NfContext& ctx);
// Negation of a complete normal form; IncompleteInputError when the input
// rows do not cover every consistent minterm exactly once.
NormalForm neg_nf(const NormalForm& complete, NfContext& ctx);
NormalForm neg_rows(const CompleteNormalForm& c);

// expand_for_nf -> translate_F -> assign_tags -> canon, with C shared by all
// leaves.
TempF prepare_restricted(const TempF& p, const VarVector& c, const Config& cfg);

// Algorithm entry point: the normal form of F(P, C).
NormalForm nf(const TempF& p, const VarVector& c, const Config& cfg);

// Normal forms of chop and projection constructs over translated operands.
NormalForm chop_nf(const TempF& p1, const TempF& p2, const VarVector& c,
                   const Config& cfg);
NormalForm prj_nf(const std::vector<TempF>& pieces, const TempF& head,
                  const VarVector& c, const Config& cfg);

}  // namespace pptlsl
