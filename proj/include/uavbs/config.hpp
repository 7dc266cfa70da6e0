#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavbs/agents.hpp"
#include "uavbs/propagation.hpp"
#include "uavbs/types.hpp"

namespace uavbs {

struct SceneConfig {
    Vec3 bounds_lo = Vec3(0.0, 0.0, 0.0);
    Vec3 bounds_hi = Vec3(520.0, 520.0, 260.0);
    double scale_m_per_unit = 20.0;
    std::vector<Vec2> tbs_positions = {Vec2(130, 130), Vec2(390, 130), Vec2(130, 390), Vec2(390, 390)};
    double tbs_coverage_m = 2400.0;
    std::vector<int> tbs_state = {0, 1, 1, 0};
    int ue_count = 400;
    double uav_range_m = 1200.0;
    int uav_altitude_min = 1; // lattice units
    int uav_altitude_max = 5;
    double sweep_interval_m = 0.0; // 0: use the UAV range

    bool operator==(const SceneConfig&) const = default;
};

struct ClusteringConfig {
    double threshold_m = 0.0; // 0: use the UAV range
    int branching = 8;
    int leaf_size = 8;

    bool operator==(const ClusteringConfig&) const = default;
};

enum class Baseline { birch, no_birch };

std::string to_string(Baseline b);
Baseline parse_baseline(const std::string& s);

struct RunConfig {
    SceneConfig scene;
    ChannelParams channel;
    AgentHyperparams agent;
    ClusteringConfig clustering;
    int episodes = 10000;
    std::uint64_t seed = 42;
    Baseline baseline = Baseline::birch;
    std::string output_dir = "out";

    /// Throws ConfigError naming the offending field.
    void validate() const;

    double uav_range_units() const { return uav_range_m() / scene.scale_m_per_unit; }
    double uav_range_m() const { return scene.uav_range_m; }

    bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON document; absent fields keep their defaults and unknown keys
/// are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string dump_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

} // namespace uavbs
