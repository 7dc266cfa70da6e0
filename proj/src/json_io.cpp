#include "uavbs/json_io.hpp"

#include <algorithm>

#include <json.hpp>

namespace uavbs {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }
json cell(const Cell& c) { return json::array({c.x(), c.y(), c.z()}); }

Vec3 read_vec3(const json& j, const char* what)
{
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(what) + " must be a 3-element array");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

const json& need(const json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(std::string("scene JSON is missing \"") + key + "\"");
    return *it;
}

} // namespace

std::string scene_json(const Scene& scene)
{
    json tbs = json::array();
    for (const auto& t : scene.tbs)
        tbs.push_back({{"id", t.id}, {"position", vec(t.position)}, {"coverage_radius", t.coverage_radius},
                       {"active", t.active}});
    json ues = json::array();
    for (const auto& u : scene.ues) {
        json e = {{"id", u.id}, {"position", vec(u.position)}, {"origin_tbs", u.origin_tbs}};
        e["serving"] = u.serving ? json(*u.serving) : json(nullptr);
        ues.push_back(std::move(e));
    }
    json j = {
        {"schema_version", kSchemaVersion},
        {"kind", "scene"},
        {"seed", scene.seed},
        {"scale_m_per_unit", scene.scale_m_per_unit},
        {"bounds", {{"min", vec(scene.bounds.lo)}, {"max", vec(scene.bounds.hi)}}},
        {"tbs", std::move(tbs)},
        {"ues", std::move(ues)},
    };
    return j.dump(2);
}

Scene parse_scene_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scene is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("scene JSON must be an object");
    try {
        if (need(j, "schema_version").get<int>() != kSchemaVersion)
            throw ConfigError("unsupported scene schema_version");
        if (need(j, "kind").get<std::string>() != "scene")
            throw ConfigError("JSON document is not a scene");
        Scene s;
        s.seed = need(j, "seed").get<std::uint64_t>();
        s.scale_m_per_unit = need(j, "scale_m_per_unit").get<double>();
        const json& b = need(j, "bounds");
        s.bounds.lo = read_vec3(need(b, "min"), "bounds.min");
        s.bounds.hi = read_vec3(need(b, "max"), "bounds.max");
        for (const auto& t : need(j, "tbs")) {
            Tbs x;
            x.id = need(t, "id").get<int>();
            x.position = read_vec3(need(t, "position"), "tbs.position");
            x.coverage_radius = need(t, "coverage_radius").get<double>();
            x.active = need(t, "active").get<bool>();
            s.tbs.push_back(x);
        }
        for (const auto& u : need(j, "ues")) {
            UserEquipment x;
            x.id = need(u, "id").get<int>();
            x.position = read_vec3(need(u, "position"), "ue.position");
            x.origin_tbs = need(u, "origin_tbs").get<int>();
            const json& sv = need(u, "serving");
            if (!sv.is_null())
                x.serving = sv.get<int>();
            s.ues.push_back(x);
        }
        check_scene(s);
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed scene JSON: ") + e.what());
    } catch (const InvariantError& e) {
        throw ConfigError(std::string("inconsistent scene JSON: ") + e.what());
    }
}

std::string assignments_json(const std::vector<Assignment>& assignments, const Scene& scene)
{
    json uavs = json::array();
    for (const auto& a : assignments)
        uavs.push_back({
            {"uav_id", a.uav_id},
            {"members", a.members},
            {"center", vec(a.circle.center)},
            {"radius", a.circle.radius},
            {"workspace", {{"min", cell(a.workspace.lo)}, {"max", cell(a.workspace.hi)}}},
            {"initial", cell(a.initial)},
        });
    json j = {
        {"schema_version", kSchemaVersion},
        {"kind", "clusters"},
        {"scale_m_per_unit", scene.scale_m_per_unit},
        {"unserved", scene.unserved_ids()},
        {"uav_count", assignments.size()},
        {"uavs", std::move(uavs)},
    };
    return j.dump(2);
}

std::string qtables_json(const std::vector<Agent>& agents)
{
    json out = json::array();
    for (const auto& a : agents) {
        std::vector<std::pair<Cell, QTable::Row>> rows(a.q.entries().begin(), a.q.entries().end());
        std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) {
            return std::lexicographical_compare(l.first.data(), l.first.data() + 3, r.first.data(),
                                                r.first.data() + 3);
        });
        json table = json::array();
        for (const auto& [c, row] : rows) {
            json r = {c.x(), c.y(), c.z()};
            for (double v : row)
                r.push_back(v);
            table.push_back(std::move(r));
        }
        out.push_back({{"uav_id", a.id}, {"epsilon", a.epsilon}, {"rows", std::move(table)}});
    }
    json columns = {"x", "y", "z"};
    for (int k = 0; k < kActionCount; ++k)
        columns.push_back(std::string(action_name(Action(k))));
    json j = {{"schema_version", kSchemaVersion}, {"kind", "qtables"}, {"columns", std::move(columns)},
              {"agents", std::move(out)}};
    return j.dump();
}

} // namespace uavbs
