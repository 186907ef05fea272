#pragma once

#include <json.hpp>

#include "minmaxlab/exclusivity.hpp"

namespace minmaxlab {

/// Every top-level document carries {"schema": kJsonSchema, "kind": ...}.
/// Field names are stable within a schema version; non-finite numbers are null.
inline constexpr const char* kJsonSchema = "minmaxlab/1";

nlohmann::ordered_json to_json(const WorstCaseResult& r);
nlohmann::ordered_json to_json(const MinimaxResult& r);
nlohmann::ordered_json to_json(const RefutationCertificate& c);
nlohmann::ordered_json to_json(const PartitionReport& r);
nlohmann::ordered_json to_json(const RealizabilityReport& r);

/// Wraps a payload as a versioned document of the given kind.
nlohmann::ordered_json document(const char* kind, nlohmann::ordered_json payload);

}  // namespace minmaxlab
