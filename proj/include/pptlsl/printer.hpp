#pragma once

#include <string>

#include "pptlsl/formula.hpp"

namespace pptlsl {

// Concrete syntax, re-parseable except for BoundedOr nodes (printed as
// "bigvee {...} . body"). Minimal parentheses; star/plus operands and prj
// heads are always parenthesized.
std::string to_string(const StateF& f);
std::string to_string(const TempF& p);
std::string to_string(const Term& t);

}  // namespace pptlsl
