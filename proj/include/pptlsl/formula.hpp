#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pptlsl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnboundVariableError : Error {
  std::string var;
  explicit UnboundVariableError(const std::string& v)
      : Error("unbound variable: " + v), var(v) {}
};

// Loc = {1..max_loc}, Val = {0..max_loc}; 0 is the null location.
struct Config {
  unsigned max_loc = 1;
  unsigned val_count() const { return max_loc + 1; }
};

// Fresh heap-vector variables live in a reserved namespace.
inline constexpr const char* kReservedPrefix = "$h";

inline bool is_reserved_name(const std::string& name) {
  return name.rfind(kReservedPrefix, 0) == 0;
}

class Term {
public:
  enum class Kind : uint8_t { Const, Var };

  Kind kind = Kind::Const;
  unsigned value = 0;
  std::string name;

  static Term constant(unsigned v) {
    Term t;
    t.kind = Kind::Const;
    t.value = v;
    return t;
  }
  static Term var(std::string n) {
    Term t;
    t.kind = Kind::Var;
    t.name = std::move(n);
    return t;
  }

  bool is_const() const { return kind == Kind::Const; }
  bool is_var() const { return kind == Kind::Var; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    return a.is_const() ? a.value == b.value : a.name == b.name;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
};

// Consts sort before vars; total order used for canonical forms.
int cmp(const Term& a, const Term& b);
std::size_t hash_term(const Term& t);

enum class StateOp : uint8_t {
  True,
  False,
  Eq,
  PointsTo,
  Neg,
  Or,
  And,
  Implies,
  SepConj,
  Exists,
  Forall,
  // derived heap predicates (expanded by expand_derived)
  Hook,
  Alloc,
  Emp,
  PredGeq,
  PredLeq,
  PredEq,
  RPlus,
  Ls,
  // symbolic disjunction over all Val-assignments of the bound variables;
  // introduced by the separating-conjunction translation
  BoundedOr,
};

class StateFormula;
using StateF = std::shared_ptr<const StateFormula>;

// Evaluation hint on BoundedOr nodes built from a separating conjunction:
// names of the parent pair and the two fresh pairs per index. Given ground
// parent values, the decomposition forces one of two assignments per index,
// so satisfying assignments can be enumerated by side choices.
struct SepSplitRow {
  std::string parent1, parent2, left1, left2, right1, right2;
};

class StateFormula {
public:
  StateOp op;
  Term lhs, rhs;                      // Eq, PointsTo, Hook, RPlus, Ls; Alloc/Pred* use lhs
  unsigned count = 0;                 // Pred* bound n
  std::string binder;                 // Exists / Forall
  std::vector<std::string> binders;   // BoundedOr
  StateF a, b;
  std::size_t hash = 0;
  // derived from the construction, never part of identity
  std::shared_ptr<const std::vector<SepSplitRow>> sep_split;

  static StateF tru();
  static StateF fals();
  static StateF emp();
  static StateF eq(Term l, Term r);
  static StateF points_to(Term l, Term r);
  static StateF hook(Term l, Term r);
  static StateF alloc(Term e);
  static StateF pred_geq(Term e, unsigned n);
  static StateF pred_leq(Term e, unsigned n);
  static StateF pred_eq(Term e, unsigned n);
  static StateF rplus(Term l, Term r);
  static StateF ls(Term l, Term r);
  static StateF neg(StateF f);
  static StateF disj(StateF l, StateF r);
  static StateF conj(StateF l, StateF r);
  static StateF implies(StateF l, StateF r);
  static StateF sep(StateF l, StateF r);
  static StateF exists(std::string x, StateF f);
  static StateF forall(std::string x, StateF f);
  static StateF bounded_or(std::vector<std::string> vars, StateF body);
  static StateF bounded_or(std::vector<std::string> vars, StateF body,
                           std::shared_ptr<const std::vector<SepSplitRow>> split);

  // n-ary helpers; empty conj = true, empty disj = false
  static StateF conj_all(const std::vector<StateF>& fs);
  static StateF disj_all(const std::vector<StateF>& fs);
};

int cmp(const StateF& a, const StateF& b);
bool equal(const StateF& a, const StateF& b);
std::set<std::string> free_vars(const StateF& f);
bool mentions_var(const StateF& f, const std::string& x);

// Capture-avoiding replacement of free x by the constant v.
StateF substitute(const StateF& f, const std::string& x, unsigned v);
StateF substitute(const StateF& f, const std::map<std::string, unsigned>& env);

// Constant folding and boolean simplification; equivalence-preserving.
StateF fold(const StateF& f);
StateF fold_substitute(const StateF& f, const std::string& x, unsigned v);

// True after expand_derived: only Eq/PointsTo/Neg/Or/And/SepConj/Exists/True/False.
bool is_core_state(const StateF& f);
// No PointsTo/SepConj/Exists/heap sugar anywhere (BoundedOr allowed: it expands
// to a plain disjunction of equations).
bool is_heap_free(const StateF& f);
bool contains_bounded_or(const StateF& f);

enum class TempOp : uint8_t {
  State,
  Neg,
  Or,
  And,
  Implies,
  Next,
  NextN,
  Chop,
  Empty,
  Prj,
  Star,
  Plus,
  Sometimes,
  Always,
};

class TemporalFormula;
using TempF = std::shared_ptr<const TemporalFormula>;

class TemporalFormula {
public:
  TempOp op;
  StateF state;             // State leaf
  std::vector<TempF> kids;  // Prj: kids[0..m-1] pieces, kids[m] head
  unsigned n = 0;           // NextN

  // Finiteness-label tags; -1 / empty when untagged. Chop carries one tag,
  // Prj one per piece, Star an alternating pair plus the current parity.
  int chop_tag = -1;
  std::vector<int> prj_tags;
  int star_tag_a = -1, star_tag_b = -1;
  bool star_parity = false;

  std::size_t hash = 0;

  static TempF lift(StateF s);
  static TempF state_true();
  static TempF state_false();
  static TempF neg(TempF p);
  static TempF disj(TempF l, TempF r);
  static TempF conj(TempF l, TempF r);
  static TempF implies(TempF l, TempF r);
  static TempF next(TempF p);
  static TempF next_n(unsigned n, TempF p);
  static TempF chop(TempF l, TempF r, int tag = -1);
  static TempF empty();
  static TempF prj(std::vector<TempF> pieces, TempF head, std::vector<int> tags = {});
  static TempF star(TempF p);
  static TempF star_tagged(TempF p, int tag_a, int tag_b, bool parity);
  static TempF plus(TempF p);
  static TempF sometimes(TempF p);
  static TempF always(TempF p);

  bool is_state() const { return op == TempOp::State; }
};

int cmp(const TempF& a, const TempF& b);
bool equal(const TempF& a, const TempF& b);
std::set<std::string> free_vars(const TempF& p);
// State formulas of the maximal state subformulas (the State leaves).
std::vector<StateF> state_leaves(const TempF& p);
// All state leaves are heap-free equations/booleans.
bool is_restricted(const TempF& p);
// Largest constant occurring in any term; 0 if none.
unsigned max_constant(const TempF& p);
unsigned max_constant(const StateF& f);

}  // namespace pptlsl
