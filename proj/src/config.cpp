#include "uavbs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uavbs {

using nlohmann::json;

std::string to_string(Baseline b) { return b == Baseline::birch ? "birch" : "no-birch"; }

Baseline parse_baseline(const std::string& s)
{
    if (s == "birch")
        return Baseline::birch;
    if (s == "no-birch")
        return Baseline::no_birch;
    throw ConfigError("baseline must be \"birch\" or \"no-birch\", got \"" + s + "\"");
}

namespace {

// Reads the keys of one JSON object, remembering which were consumed so the
// leftovers can be reported.
class Fields {
public:
    Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ConfigError(path_ + " must be a JSON object");
    }

    template <typename T>
    void read(const char* key, T& out)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end())
            return;
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(name(key) + ": " + e.what());
        }
    }

    void read(const char* key, Vec3& out)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end())
            return;
        const auto v = as_doubles(*it, key);
        if (v.size() != 3)
            throw ConfigError(name(key) + " must have 3 components");
        out = Vec3(v[0], v[1], v[2]);
    }

    void read(const char* key, std::vector<Vec2>& out)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end())
            return;
        if (!it->is_array())
            throw ConfigError(name(key) + " must be an array of [x, y] pairs");
        out.clear();
        for (const auto& e : *it) {
            const auto v = as_doubles(e, key);
            if (v.size() != 2)
                throw ConfigError(name(key) + " entries must have 2 components");
            out.emplace_back(v[0], v[1]);
        }
    }

    const json* child(const char* key)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void finish() const
    {
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key))
                throw ConfigError("unknown configuration key " + name(key.c_str()));
    }

    std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::vector<double> as_doubles(const json& v, const char* key) const
    {
        if (!v.is_array())
            throw ConfigError(name(key) + " must be a numeric array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number())
                throw ConfigError(name(key) + " must be a numeric array");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_scene(const json& j, SceneConfig& s)
{
    Fields f(j, "scene");
    f.read("bounds_min", s.bounds_lo);
    f.read("bounds_max", s.bounds_hi);
    f.read("scale_m_per_unit", s.scale_m_per_unit);
    f.read("tbs_positions", s.tbs_positions);
    f.read("tbs_coverage_m", s.tbs_coverage_m);
    f.read("tbs_state", s.tbs_state);
    f.read("ue_count", s.ue_count);
    f.read("uav_range_m", s.uav_range_m);
    f.read("uav_altitude_min", s.uav_altitude_min);
    f.read("uav_altitude_max", s.uav_altitude_max);
    f.read("sweep_interval_m", s.sweep_interval_m);
    f.finish();
}

void read_channel(const json& j, ChannelParams& c)
{
    Fields f(j, "channel");
    f.read("carrier_hz", c.carrier_hz);
    f.read("tx_power_w", c.tx_power_w);
    f.read("tx_gain", c.tx_gain);
    f.read("rx_gain", c.rx_gain);
    f.read("bandwidth_hz", c.bandwidth_hz);
    f.read("noise_dbm_per_hz", c.noise_dbm_per_hz);
    f.read("tbs_height_m", c.tbs_height_m);
    f.read("ue_height_m", c.ue_height_m);
    f.read("alpha", c.env_alpha);
    f.read("beta", c.env_beta);
    f.read("mu_los_db", c.mu_los_db);
    f.read("mu_nlos_db", c.mu_nlos_db);
    f.read("impedance_ohm", c.impedance_ohm);
    f.read("light_speed", c.light_speed);
    f.read("n", c.table_n);
    f.finish();
}

void read_agent(const json& j, AgentHyperparams& a)
{
    Fields f(j, "agent");
    f.read("lr", a.lr);
    f.read("gamma", a.gamma);
    f.read("epsilon", a.epsilon);
    f.read("decay", a.decay);
    f.read("epsilon_min", a.epsilon_min);
    f.read("battery", a.battery);
    f.read("rate_threshold", a.rate_threshold);
    f.read("decay_per_step", a.decay_per_step);
    f.finish();
}

void read_clustering(const json& j, ClusteringConfig& c)
{
    Fields f(j, "clustering");
    f.read("threshold_m", c.threshold_m);
    f.read("branching", c.branching);
    f.read("leaf_size", c.leaf_size);
    f.finish();
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

} // namespace

void RunConfig::validate() const
{
    const SceneConfig& s = scene;
    if (episodes < 1)
        throw ConfigError("episodes must be at least 1");
    if (!(s.scale_m_per_unit > 0.0))
        throw ConfigError("scene.scale_m_per_unit must be positive");
    if (((s.bounds_hi - s.bounds_lo).array() <= 0.0).any())
        throw ConfigError("scene.bounds_max must exceed scene.bounds_min on every axis");
    if (s.tbs_positions.empty())
        throw ConfigError("scene.tbs_positions must not be empty");
    if (s.tbs_state.size() != s.tbs_positions.size())
        throw ConfigError("scene.tbs_state must have one entry per TBS");
    for (int v : s.tbs_state)
        if (v != 0 && v != 1)
            throw ConfigError("scene.tbs_state entries must be 0 or 1");
    if (!(s.tbs_coverage_m > 0.0))
        throw ConfigError("scene.tbs_coverage_m must be positive");
    if (s.ue_count < 0)
        throw ConfigError("scene.ue_count must be non-negative");
    if (!(s.uav_range_m > 0.0))
        throw ConfigError("scene.uav_range_m must be positive");
    if (s.uav_altitude_min < 1 || s.uav_altitude_max < s.uav_altitude_min)
        throw ConfigError("scene.uav_altitude_min must be >= 1 and <= scene.uav_altitude_max");
    if (s.uav_altitude_max > s.bounds_hi.z())
        throw ConfigError("scene.uav_altitude_max exceeds the scene height");
    if (s.uav_altitude_min >= s.uav_range_m / s.scale_m_per_unit)
        throw ConfigError("scene.uav_altitude_min leaves no ground footprint within scene.uav_range_m");
    if (s.sweep_interval_m < 0.0)
        throw ConfigError("scene.sweep_interval_m must be non-negative");
    if (clustering.threshold_m < 0.0)
        throw ConfigError("clustering.threshold_m must be non-negative");
    if (clustering.branching < 2 || clustering.leaf_size < 2)
        throw ConfigError("clustering.branching and clustering.leaf_size must be at least 2");
    channel.validate();
    agent.validate();
}

RunConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    Fields f(j, "");
    if (const json* s = f.child("scene"))
        read_scene(*s, cfg.scene);
    if (const json* c = f.child("channel"))
        read_channel(*c, cfg.channel);
    if (const json* a = f.child("agent"))
        read_agent(*a, cfg.agent);
    if (const json* c = f.child("clustering"))
        read_clustering(*c, cfg.clustering);
    f.read("episodes", cfg.episodes);
    f.read("seed", cfg.seed);
    std::string baseline = to_string(cfg.baseline);
    f.read("baseline", baseline);
    cfg.baseline = parse_baseline(baseline);
    f.read("output_dir", cfg.output_dir);
    f.finish();
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open configuration file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg)
{
    json tbs = json::array();
    for (const auto& p : cfg.scene.tbs_positions)
        tbs.push_back(json::array({p.x(), p.y()}));
    const auto& s = cfg.scene;
    const auto& c = cfg.channel;
    const auto& a = cfg.agent;
    json j = {
        {"scene",
         {{"bounds_min", vec_json(s.bounds_lo)},
          {"bounds_max", vec_json(s.bounds_hi)},
          {"scale_m_per_unit", s.scale_m_per_unit},
          {"tbs_positions", tbs},
          {"tbs_coverage_m", s.tbs_coverage_m},
          {"tbs_state", s.tbs_state},
          {"ue_count", s.ue_count},
          {"uav_range_m", s.uav_range_m},
          {"uav_altitude_min", s.uav_altitude_min},
          {"uav_altitude_max", s.uav_altitude_max},
          {"sweep_interval_m", s.sweep_interval_m}}},
        {"channel",
         {{"carrier_hz", c.carrier_hz},
          {"tx_power_w", c.tx_power_w},
          {"tx_gain", c.tx_gain},
          {"rx_gain", c.rx_gain},
          {"bandwidth_hz", c.bandwidth_hz},
          {"noise_dbm_per_hz", c.noise_dbm_per_hz},
          {"tbs_height_m", c.tbs_height_m},
          {"ue_height_m", c.ue_height_m},
          {"alpha", c.env_alpha},
          {"beta", c.env_beta},
          {"mu_los_db", c.mu_los_db},
          {"mu_nlos_db", c.mu_nlos_db},
          {"impedance_ohm", c.impedance_ohm},
          {"light_speed", c.light_speed},
          {"n", c.table_n}}},
        {"agent",
         {{"lr", a.lr},
          {"gamma", a.gamma},
          {"epsilon", a.epsilon},
          {"decay", a.decay},
          {"epsilon_min", a.epsilon_min},
          {"battery", a.battery},
          {"rate_threshold", a.rate_threshold},
          {"decay_per_step", a.decay_per_step}}},
        {"clustering",
         {{"threshold_m", cfg.clustering.threshold_m},
          {"branching", cfg.clustering.branching},
          {"leaf_size", cfg.clustering.leaf_size}}},
        {"episodes", cfg.episodes},
        {"seed", cfg.seed},
        {"baseline", to_string(cfg.baseline)},
        {"output_dir", cfg.output_dir},
    };
    return j.dump(2);
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write configuration file " + path.string());
    out << dump_config(cfg) << '\n';
}

} // namespace uavbs
