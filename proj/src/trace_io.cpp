#include "pptlsl/trace_io.hpp"

#include <json.hpp>

namespace pptlsl {

using nlohmann::json;

Interval parse_trace(const std::string& json_text, const Config& cfg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw TraceFormatError(std::string("trace is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("states") || !doc["states"].is_array())
    throw TraceFormatError("trace must be an object with a \"states\" array");
  const json& states = doc["states"];
  if (states.empty()) throw TraceFormatError("trace must contain at least one state");
  Interval iv;
  for (const json& js : states) {
    if (!js.is_object()) throw TraceFormatError("each state must be an object");
    MemoryState s;
    if (js.contains("stack")) {
      if (!js["stack"].is_object()) throw TraceFormatError("\"stack\" must be an object");
      for (auto it = js["stack"].begin(); it != js["stack"].end(); ++it) {
        if (!it.value().is_number_unsigned())
          throw TraceFormatError("stack value for '" + it.key() +
                                 "' must be a non-negative integer");
        unsigned v = it.value().get<unsigned>();
        if (v > cfg.max_loc)
          throw TraceFormatError("stack value " + std::to_string(v) + " exceeds maxLoc");
        s.stack[it.key()] = v;
      }
    }
    if (js.contains("heap")) {
      if (!js["heap"].is_object()) throw TraceFormatError("\"heap\" must be an object");
      for (auto it = js["heap"].begin(); it != js["heap"].end(); ++it) {
        unsigned loc = 0;
        try {
          std::size_t pos = 0;
          unsigned long parsed = std::stoul(it.key(), &pos);
          if (pos != it.key().size()) throw std::invalid_argument("trailing");
          loc = static_cast<unsigned>(parsed);
        } catch (...) {
          throw TraceFormatError("heap key '" + it.key() + "' is not a location");
        }
        if (loc == 0 || loc > cfg.max_loc)
          throw TraceFormatError("heap location " + it.key() + " outside 1..maxLoc");
        if (!it.value().is_number_unsigned())
          throw TraceFormatError("heap value at " + it.key() + " must be a non-negative integer");
        unsigned v = it.value().get<unsigned>();
        if (v > cfg.max_loc)
          throw TraceFormatError("heap value " + std::to_string(v) + " exceeds maxLoc");
        s.heap[loc] = v;
      }
    }
    iv.states.push_back(std::move(s));
  }
  return iv;
}

std::string serialize_trace(const Interval& iv) {
  json doc;
  doc["states"] = json::array();
  for (const auto& s : iv.states) {
    json js;
    js["stack"] = json::object();
    for (const auto& [k, v] : s.stack) js["stack"][k] = v;
    js["heap"] = json::object();
    for (const auto& [loc, v] : s.heap) js["heap"][std::to_string(loc)] = v;
    doc["states"].push_back(std::move(js));
  }
  return doc.dump(2);
}

}  // namespace pptlsl
