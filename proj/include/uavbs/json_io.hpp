#pragma once

#include <string>
#include <vector>

#include "uavbs/agents.hpp"
#include "uavbs/discovery.hpp"
#include "uavbs/scenario.hpp"

namespace uavbs {

inline constexpr int kSchemaVersion = 1;

std::string scene_json(const Scene& scene);

/// Inverse of scene_json; throws ConfigError on schema mismatches.
Scene parse_scene_json(const std::string& text);

std::string assignments_json(const std::vector<Assignment>& assignments, const Scene& scene);

/// One compact row per visited cell: x, y, z, then Q for each action in code
/// order. Rows are sorted by cell for stable output.
std::string qtables_json(const std::vector<Agent>& agents);

} // namespace uavbs
