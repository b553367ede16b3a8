#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace genus {

using Json = nlohmann::json;

/// One checked property: {property, pass, witness}.
struct PropertyResult {
  std::string property;
  bool pass = false;
  Json witness;
};

inline Json to_json(const PropertyResult& r) {
  return Json{{"property", r.property}, {"pass", r.pass}, {"witness", r.witness}};
}

inline Json to_json(const std::vector<PropertyResult>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) out.push_back(to_json(r));
  return out;
}

inline bool all_pass(const std::vector<PropertyResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace genus
