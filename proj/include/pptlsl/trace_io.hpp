#pragma once

#include <string>

#include "pptlsl/formula.hpp"
#include "pptlsl/interval.hpp"

namespace pptlsl {

struct TraceFormatError : Error {
  using Error::Error;
};

// Trace schema: {"states":[{"stack":{"x":1},"heap":{"1":0}}, ...]}
// Nonempty; heap keys parse as locations in 1..maxLoc; values in 0..maxLoc.
Interval parse_trace(const std::string& json_text, const Config& cfg);
std::string serialize_trace(const Interval& iv);

}  // namespace pptlsl
