#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "uavbs/agents.hpp"
#include "uavbs/config.hpp"
#include "uavbs/discovery.hpp"
#include "uavbs/scenario.hpp"

namespace uavbs {

/// TBS layout plus the generated UEs, before the disaster.
Scene build_scene(const RunConfig& cfg);

AltitudeBand altitude_band(const RunConfig& cfg);

/// The BIRCH threshold defaults to the UAV range; circles may not exceed the
/// ground footprint of that range at the lowest flight level, less half a
/// lattice diagonal for snapping.
ClusteringOptions clustering_options(const RunConfig& cfg);

/// Everything up to training: scene, disaster, sweep, clusters, workspaces.
struct Prepared {
    Scene intact;
    Scene scene; // after the disaster
    SweepResult sweep;
    std::vector<Cluster> clusters;
    std::vector<Assignment> assignments; // one UAV per cluster
};

Prepared prepare(const RunConfig& cfg);

/// Workspaces used by the chosen arm.
std::vector<Assignment> arm_assignments(const Prepared& prep, const RunConfig& cfg, Baseline arm);

struct RunSummary {
    int episodes = 0;
    int uavs = 0;
    int unserved_ues = 0;
    int window = 0;                 // trailing episodes the means cover
    double mean_steps = 0.0;
    double mean_system_reward = 0.0;
    double full_coverage_rate = 0.0; // fraction of window episodes ending at coverage 1
    double wall_seconds = 0.0;
};

struct RunResult {
    std::vector<EpisodeMetrics> episodes;
    RunSummary summary;
    std::vector<Agent> agents; // learned state after the last episode
};

using ProgressFn = std::function<void(const EpisodeMetrics&)>;

/// Trains one arm in memory.
RunResult train(const RunConfig& cfg, const Prepared& prep, Baseline arm, const ProgressFn& progress = {});

RunSummary summarize(const std::vector<EpisodeMetrics>& episodes, int window);

/// Header: episode,steps,coverage,r_sys,r_agent_0..r_agent_{N-1},epsilon.
std::string metrics_csv(const std::vector<EpisodeMetrics>& episodes, std::size_t agents);

/// Full pipeline for cfg.baseline; writes scene.json, clusters.json,
/// metrics.csv, qtables.json and summary.json into `out_dir`.
RunResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                         const ProgressFn& progress = {});

struct WindowComparison {
    int window = 0;
    double birch_reward = 0.0;
    double no_birch_reward = 0.0;
    double birch_steps = 0.0;
    double no_birch_steps = 0.0;
};

struct Comparison {
    RunResult birch;
    RunResult no_birch;
    std::vector<WindowComparison> windows;
};

/// Runs both arms from the same prepared pipeline and seed.
Comparison compare_baselines(const RunConfig& cfg, const std::vector<int>& windows = {100, 500, 1000},
                             const ProgressFn& progress = {});

/// As above, writing each arm to its own subdirectory plus comparison.json.
Comparison compare_baselines(const RunConfig& cfg, const std::filesystem::path& out_dir,
                             const std::vector<int>& windows = {100, 500, 1000}, const ProgressFn& progress = {});

} // namespace uavbs
