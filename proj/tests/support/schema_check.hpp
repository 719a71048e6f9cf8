// Minimal JSON Schema checker covering the subset used by
// schema/report.schema.json: type (string or array of strings), properties,
// required, additionalProperties, items, enum, minimum, maximum, minItems,
// and $ref into #/definitions.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ot::testing {

// Returns a list of violations ("pointer: message"); empty means valid.
std::vector<std::string> schema_violations(const nlohmann::json& schema,
                                           const nlohmann::json& document);

}  // namespace ot::testing
