#include "uavbs/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "uavbs/coverage.hpp"
#include "uavbs/json_io.hpp"

namespace uavbs {

using nlohmann::json;

Scene build_scene(const RunConfig& cfg)
{
    cfg.validate();
    const SceneConfig& sc = cfg.scene;
    Scene s;
    s.bounds.lo = sc.bounds_lo;
    s.bounds.hi = sc.bounds_hi;
    s.scale_m_per_unit = sc.scale_m_per_unit;
    s.seed = cfg.seed;
    for (std::size_t j = 0; j < sc.tbs_positions.size(); ++j) {
        Tbs t;
        t.id = int(j);
        t.position = Vec3(sc.tbs_positions[j].x(), sc.tbs_positions[j].y(), s.to_units(cfg.channel.tbs_height_m));
        t.coverage_radius = s.to_units(sc.tbs_coverage_m);
        s.tbs.push_back(t);
    }
    s.ues = generate_ues(s.tbs, sc.ue_count, cfg.seed, s.to_units(cfg.channel.ue_height_m));
    check_scene(s);
    return s;
}

AltitudeBand altitude_band(const RunConfig& cfg)
{
    return AltitudeBand{cfg.scene.uav_altitude_min, cfg.scene.uav_altitude_max};
}

ClusteringOptions clustering_options(const RunConfig& cfg)
{
    const double range = cfg.uav_range_units();
    const double z = cfg.scene.uav_altitude_min;
    ClusteringOptions o;
    o.threshold = cfg.clustering.threshold_m > 0.0 ? cfg.clustering.threshold_m / cfg.scene.scale_m_per_unit : range;
    o.branching = cfg.clustering.branching;
    o.leaf_size = cfg.clustering.leaf_size;
    o.max_circle_radius = std::max(0.0, std::sqrt(range * range - z * z) - std::sqrt(0.5));
    return o;
}

Prepared prepare(const RunConfig& cfg)
{
    Prepared p;
    p.intact = build_scene(cfg);
    p.scene = apply_disaster(p.intact, cfg.scene.tbs_state);
    check_scene(p.scene);
    const double interval_m = cfg.scene.sweep_interval_m > 0.0 ? cfg.scene.sweep_interval_m : cfg.uav_range_m();
    p.sweep = zigzag_sweep(p.scene, p.scene.to_units(interval_m));
    p.clusters = cluster_ues(p.sweep.discovered, clustering_options(cfg));
    p.assignments = assign_uavs(p.clusters, p.scene, altitude_band(cfg), cfg.seed);
    return p;
}

std::vector<Assignment> arm_assignments(const Prepared& prep, const RunConfig& cfg, Baseline arm)
{
    if (arm == Baseline::birch)
        return prep.assignments;
    return undivided_workspaces(prep.assignments, prep.scene, altitude_band(cfg));
}

RunSummary summarize(const std::vector<EpisodeMetrics>& episodes, int window)
{
    RunSummary s;
    s.episodes = int(episodes.size());
    s.window = std::min<int>(window, s.episodes);
    if (s.window == 0)
        return s;
    int full = 0;
    for (auto it = episodes.end() - s.window; it != episodes.end(); ++it) {
        s.mean_steps += it->steps;
        s.mean_system_reward += it->system_reward;
        full += it->coverage >= 1.0;
    }
    s.mean_steps /= s.window;
    s.mean_system_reward /= s.window;
    s.full_coverage_rate = double(full) / s.window;
    return s;
}

RunResult train(const RunConfig& cfg, const Prepared& prep, Baseline arm, const ProgressFn& progress)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto assignments = arm_assignments(prep, cfg, arm);
    std::vector<std::vector<int>> members;
    for (const auto& a : assignments)
        members.push_back(a.members);

    RunResult r;
    if (!assignments.empty()) {
        const CoverageModel model(prep.scene, cfg.channel, members, cfg.uav_range_units(),
                                  cfg.agent.rate_threshold);
        Trainer trainer(model, assignments, cfg.agent, cfg.seed);
        r.episodes.reserve(std::size_t(cfg.episodes));
        for (int e = 0; e < cfg.episodes; ++e) {
            r.episodes.push_back(trainer.run_episode(e));
            if (progress)
                progress(r.episodes.back());
        }
        r.agents = trainer.agents();
    } else {
        // Nothing failed over: every episode is an immediate win.
        for (int e = 0; e < cfg.episodes; ++e) {
            EpisodeMetrics m;
            m.episode = e;
            m.coverage = 1.0;
            m.epsilon = cfg.agent.epsilon;
            r.episodes.push_back(m);
        }
    }
    r.summary = summarize(r.episodes, 500);
    r.summary.uavs = int(assignments.size());
    r.summary.unserved_ues = int(prep.sweep.discovered.size());
    r.summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

void put(std::string& out, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out)
        throw ConfigError("write failed for " + path.string());
}

json summary_json(const RunSummary& s, Baseline arm, std::uint64_t seed)
{
    return {
        {"schema_version", kSchemaVersion},
        {"kind", "summary"},
        {"baseline", to_string(arm)},
        {"seed", seed},
        {"episodes", s.episodes},
        {"uavs", s.uavs},
        {"unserved_ues", s.unserved_ues},
        {"window", s.window},
        {"mean_steps", s.mean_steps},
        {"mean_system_reward", s.mean_system_reward},
        {"full_coverage_rate", s.full_coverage_rate},
        {"wall_seconds", s.wall_seconds},
    };
}

void write_run(const std::filesystem::path& dir, const RunConfig& cfg, const Prepared& prep, Baseline arm,
               const RunResult& r)
{
    std::filesystem::create_directories(dir);
    write_file(dir / "scene.json", scene_json(prep.scene) + "\n");
    write_file(dir / "clusters.json", assignments_json(arm_assignments(prep, cfg, arm), prep.scene) + "\n");
    write_file(dir / "metrics.csv", metrics_csv(r.episodes, std::size_t(r.summary.uavs)));
    write_file(dir / "qtables.json", qtables_json(r.agents) + "\n");
    write_file(dir / "summary.json", summary_json(r.summary, arm, cfg.seed).dump(2) + "\n");
}

} // namespace

std::string metrics_csv(const std::vector<EpisodeMetrics>& episodes, std::size_t agents)
{
    std::string out = "episode,steps,coverage,r_sys";
    for (std::size_t i = 0; i < agents; ++i)
        out += ",r_agent_" + std::to_string(i);
    out += ",epsilon\n";
    for (const auto& m : episodes) {
        if (m.agent_reward.size() != agents && !(agents == 0 || m.agent_reward.empty()))
            throw InvariantError("metrics row has the wrong agent count");
        out += std::to_string(m.episode);
        out += ',';
        out += std::to_string(m.steps);
        out += ',';
        put(out, m.coverage);
        out += ',';
        put(out, m.system_reward);
        for (std::size_t i = 0; i < agents; ++i) {
            out += ',';
            put(out, i < m.agent_reward.size() ? m.agent_reward[i] : 0.0);
        }
        out += ',';
        put(out, m.epsilon);
        out += '\n';
    }
    return out;
}

RunResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir, const ProgressFn& progress)
{
    const Prepared prep = prepare(cfg);
    RunResult r = train(cfg, prep, cfg.baseline, progress);
    write_run(out_dir, cfg, prep, cfg.baseline, r);
    return r;
}

Comparison compare_baselines(const RunConfig& cfg, const std::vector<int>& windows, const ProgressFn& progress)
{
    const Prepared prep = prepare(cfg);
    Comparison c;
    c.birch = train(cfg, prep, Baseline::birch, progress);
    c.no_birch = train(cfg, prep, Baseline::no_birch, progress);
    for (int w : windows) {
        const RunSummary a = summarize(c.birch.episodes, w);
        const RunSummary b = summarize(c.no_birch.episodes, w);
        // Windows longer than the run collapse onto the same span.
        if (!c.windows.empty() && c.windows.back().window == a.window)
            continue;
        c.windows.push_back({a.window, a.mean_system_reward, b.mean_system_reward, a.mean_steps, b.mean_steps});
    }
    return c;
}

Comparison compare_baselines(const RunConfig& cfg, const std::filesystem::path& out_dir,
                             const std::vector<int>& windows, const ProgressFn& progress)
{
    const Prepared prep = prepare(cfg);
    Comparison c = compare_baselines(cfg, windows, progress);
    write_run(out_dir / "birch", cfg, prep, Baseline::birch, c.birch);
    write_run(out_dir / "no-birch", cfg, prep, Baseline::no_birch, c.no_birch);

    json rows = json::array();
    for (const auto& w : c.windows)
        rows.push_back({{"window", w.window},
                        {"birch_mean_system_reward", w.birch_reward},
                        {"no_birch_mean_system_reward", w.no_birch_reward},
                        {"birch_mean_steps", w.birch_steps},
                        {"no_birch_mean_steps", w.no_birch_steps},
                        {"birch_ahead", w.birch_reward > w.no_birch_reward}});
    const json j = {{"schema_version", kSchemaVersion}, {"kind", "comparison"}, {"seed", cfg.seed},
                    {"episodes", cfg.episodes},       {"windows", std::move(rows)}};
    write_file(out_dir / "comparison.json", j.dump(2) + "\n");
    return c;
}

} // namespace uavbs
