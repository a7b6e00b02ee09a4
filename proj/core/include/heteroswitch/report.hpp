#pragma once

// Structured (JSON) and plain-text rendering of analysis results.

#include <string>
#include <vector>

#include <json.hpp>

#include "heteroswitch/cusp.hpp"
#include "heteroswitch/log_cone.hpp"
#include "heteroswitch/map_algebra.hpp"
#include "heteroswitch/switching.hpp"

namespace heteroswitch {

using Json = nlohmann::json;

Json to_json(const FeasibilityVerdict& v);
FeasibilityVerdict verdict_from_json(const Json& j);

Json to_json(const NetworkReport& r);
/// Inverse of to_json; throws nlohmann::json::exception on schema mismatch.
NetworkReport report_from_json(const Json& j);
std::string render_text(const NetworkReport& r);

Json to_json(const std::vector<PathVerdict>& paths);
std::string render_text(const std::vector<PathVerdict>& paths);

Json to_json(const LogAffineMap& m);
Json to_json(const RegionSystem& s);

[[nodiscard]] std::string join_path(const std::vector<std::string>& path);

}  // namespace heteroswitch
