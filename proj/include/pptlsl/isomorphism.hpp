#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pptlsl/formula.hpp"

namespace pptlsl {

struct IsoError : Error {
  using Error::Error;
};
// n = m equations must be folded to true/false before mapping.
struct ConstConstError : IsoError {
  unsigned lhs, rhs;
  ConstConstError(unsigned l, unsigned r)
      : IsoError("constant equation " + std::to_string(l) + " = " + std::to_string(r) +
                 " must be folded before the isomorphic mapping"),
        lhs(l),
        rhs(r) {}
};
struct UnknownPropositionError : IsoError {
  explicit UnknownPropositionError(const std::string& name)
      : IsoError("proposition '" + name + "' is outside the g-image namespace") {}
};

// q_{i,j}: constant i, variable index j.  p_{i,j}: variable indices, i < j.
struct PropName {
  enum class Kind : uint8_t { Q, P } kind;
  unsigned i = 0, j = 0;

  std::string str() const;
  static std::optional<PropName> parse(const std::string& name);

  friend bool operator==(const PropName& a, const PropName& b) {
    return a.kind == b.kind && a.i == b.i && a.j == b.j;
  }
};

// Global variable ordering: first occurrence in the formula; kept alongside
// the PPTL image so H can invert names back to source identifiers.
struct NameTable {
  std::vector<std::string> vars;
  std::map<std::string, unsigned> index;

  unsigned intern(const std::string& name);
  const std::string& name_for(unsigned idx);  // synthesizes x<idx> when absent
};

// PPTL formulas: the temporal skeleton with proposition leaves.
class PPTLFormula;
using PptlF = std::shared_ptr<const PPTLFormula>;

class PPTLFormula {
 public:
  TempOp op;                // State means proposition leaf
  std::string prop;
  std::vector<PptlF> kids;
  unsigned n = 0;
  std::size_t hash = 0;

  static PptlF atom(std::string name);
  static PptlF make(TempOp op, std::vector<PptlF> kids, unsigned n = 0);
};

int cmp(const PptlF& a, const PptlF& b);
bool equal(const PptlF& a, const PptlF& b);
std::string to_string(const PptlF& q);

// The bijection on atoms: canonicalizes (constant left, variables ordered by
// table index) and maps to a proposition name.
PropName g_map(const StateF& eq, NameTable& tbl);
StateF g_inverse(const PropName& p, NameTable& tbl);

// Structural mappings between restricted formulas and PPTL.
PptlF G(const TempF& restricted, NameTable& tbl);
TempF H(const PptlF& q, NameTable& tbl);

// The isomorphism relation, clause by clause.
bool is_isomorphic(const TempF& restricted, const PptlF& q, NameTable& tbl);

}  // namespace pptlsl
