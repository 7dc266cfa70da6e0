#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavbs/config.hpp"
#include "uavbs/experiment.hpp"
#include "uavbs/json_io.hpp"
#include "uavbs/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace uavbs;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::string out;
    std::string baseline;
    std::string config;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--out", o.out, "Output directory");
}

RunConfig resolve(const std::string& path, const Overrides& o)
{
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.episodes)
        cfg.episodes = *o.episodes;
    if (!o.baseline.empty())
        cfg.baseline = parse_baseline(o.baseline);
    if (!o.out.empty())
        cfg.output_dir = o.out;
    cfg.validate();
    return cfg;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProgressFn progress_printer(int episodes)
{
    const int every = std::max(1, episodes / 20);
    return [every](const EpisodeMetrics& m) {
        if ((m.episode + 1) % every == 0)
            std::fprintf(stderr, "episode %6d  steps %3d  coverage %.3f  r_sys %9.3f  eps %.4f\n", m.episode + 1,
                         m.steps, m.coverage, m.system_reward, m.epsilon);
    };
}

void print_summary(const char* arm, const RunSummary& s)
{
    std::printf("%-9s uavs=%d unserved=%d last %d episodes: mean steps %.2f, mean r_sys %.3f, "
                "full coverage %.1f%%, %.1fs\n",
                arm, s.uavs, s.unserved_ues, s.window, s.mean_steps, s.mean_system_reward,
                100.0 * s.full_coverage_rate, s.wall_seconds);
}

int cmd_run(const std::string& path, const Overrides& o)
{
    const RunConfig cfg = resolve(path, o);
    const RunResult r = run_experiment(cfg, cfg.output_dir, progress_printer(cfg.episodes));
    print_summary(to_string(cfg.baseline).c_str(), r.summary);
    std::printf("wrote %s\n", cfg.output_dir.c_str());
    return 0;
}

int cmd_compare(const std::string& path, const Overrides& o)
{
    const RunConfig cfg = resolve(path, o);
    const Comparison c = compare_baselines(cfg, fs::path(cfg.output_dir), {100, 500, 1000},
                                           progress_printer(cfg.episodes));
    print_summary("birch", c.birch.summary);
    print_summary("no-birch", c.no_birch.summary);
    for (const auto& w : c.windows)
        std::printf("window %4d: r_sys birch %.3f vs no-birch %.3f, steps %.2f vs %.2f\n", w.window,
                    w.birch_reward, w.no_birch_reward, w.birch_steps, w.no_birch_steps);
    std::printf("wrote %s\n", cfg.output_dir.c_str());
    return 0;
}

// Accepts a scene snapshot (scene.json from a run) or a run configuration.
int cmd_cluster(const std::string& path, const Overrides& o)
{
    const std::string text = slurp(path);
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    const bool is_scene = doc.is_object() && doc.value("kind", "") == "scene";

    RunConfig cfg = resolve(is_scene ? o.config : path, o);
    Prepared prep;
    if (is_scene) {
        prep.scene = parse_scene_json(text);
        const double interval_m = cfg.scene.sweep_interval_m > 0.0 ? cfg.scene.sweep_interval_m : cfg.uav_range_m();
        prep.sweep = zigzag_sweep(prep.scene, prep.scene.to_units(interval_m));
        prep.clusters = cluster_ues(prep.sweep.discovered, clustering_options(cfg));
        prep.assignments = assign_uavs(prep.clusters, prep.scene, altitude_band(cfg), cfg.seed);
    } else {
        prep = prepare(cfg);
    }

    const std::string json = assignments_json(prep.assignments, prep.scene) + "\n";
    if (o.out.empty()) {
        std::fputs(json.c_str(), stdout);
    } else {
        fs::create_directories(o.out);
        std::ofstream(fs::path(o.out) / "clusters.json", std::ios::binary) << json;
        std::printf("%zu unserved UEs, %zu clusters; wrote %s\n", prep.sweep.discovered.size(),
                    prep.assignments.size(), (fs::path(o.out) / "clusters.json").c_str());
    }
    return 0;
}

int cmd_plot(const std::string& path, const std::string& out, int smooth)
{
    const CsvTable table = parse_csv(slurp(path));
    const fs::path dir = out.empty() ? fs::path(path).parent_path() : fs::path(out);
    if (!dir.empty())
        fs::create_directories(dir);
    const std::string stem = fs::path(path).stem().string();

    std::vector<std::string> agents;
    for (const auto& h : table.header)
        if (h.rfind("r_agent_", 0) == 0)
            agents.push_back(h);

    struct Chart {
        std::string name;
        std::vector<std::string> columns;
        std::string title;
    };
    std::vector<Chart> charts = {
        {"steps", {"steps"}, "Steps per episode"},
        {"r_sys", {"r_sys"}, "System reward"},
        {"coverage", {"coverage"}, "Final coverage fraction"},
    };
    if (!agents.empty())
        charts.push_back({"agents", agents, "Reward per agent"});

    for (const auto& c : charts) {
        PlotOptions opts;
        opts.title = c.title + (smooth > 1 ? " (moving average " + std::to_string(smooth) + ")" : "");
        opts.smooth = smooth;
        const fs::path file = dir / (stem + "_" + c.name + ".svg");
        std::ofstream(file, std::ios::binary) << svg_line_chart(table, "episode", c.columns, opts);
        std::printf("wrote %s\n", file.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"UAV base-station restoration simulator"};
    app.require_subcommand(1);

    Overrides o;
    std::string path;
    int smooth = 50;

    auto* run = app.add_subcommand("run", "Run the full pipeline and train one arm");
    run->add_option("config", path, "JSON configuration")->check(CLI::ExistingFile);
    add_common(run, o);
    run->add_option("--episodes", o.episodes, "Training episodes");
    run->add_option("--baseline", o.baseline, "birch or no-birch")->check(CLI::IsMember({"birch", "no-birch"}));

    auto* compare = app.add_subcommand("compare", "Train the BIRCH and no-BIRCH arms on the same scene");
    compare->add_option("config", path, "JSON configuration")->check(CLI::ExistingFile);
    add_common(compare, o);
    compare->add_option("--episodes", o.episodes, "Training episodes");

    auto* cluster = app.add_subcommand("cluster", "Sweep, cluster and place UAVs without training");
    cluster->add_option("scene", path, "scene.json snapshot or JSON configuration")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(cluster, o);
    cluster->add_option("--config", o.config, "Configuration for radio and clustering parameters")
        ->check(CLI::ExistingFile);

    auto* plot = app.add_subcommand("plot", "Render SVG charts from a metrics CSV");
    plot->add_option("csv", path, "metrics.csv")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", o.out, "Output directory (default: next to the CSV)");
    plot->add_option("--smooth", smooth, "Moving-average window")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(path, o);
        if (*compare)
            return cmd_compare(path, o);
        if (*cluster)
            return cmd_cluster(path, o);
        if (*plot)
            return cmd_plot(path, o.out, smooth);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
