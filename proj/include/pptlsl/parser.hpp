#pragma once

#include <string>

#include "pptlsl/formula.hpp"

namespace pptlsl {

struct SyntaxError : Error {
  int line = 0, col = 0;
  SyntaxError(int line_, int col_, const std::string& msg)
      : Error("syntax error at " + std::to_string(line_) + ":" +
              std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct ParseOptions {
  // Permit identifiers in the reserved "$h" namespace (internal use only).
  bool allow_reserved = false;
};

// Parses one formula; pure-state subtrees collapse to a single State leaf
// (a formula without temporal operators is a state formula).
TempF parse_formula(const std::string& text, const ParseOptions& opts = {});

}  // namespace pptlsl
