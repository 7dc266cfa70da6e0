#include "uavbs/scenario.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uavbs/rng.hpp"

namespace uavbs {

std::vector<int> Scene::unserved_ids() const
{
    std::vector<int> ids;
    for (const auto& ue : ues)
        if (ue.cs() == 0)
            ids.push_back(ue.id);
    return ids;
}

std::vector<UserEquipment> generate_ues(std::span<const Tbs> tbs_list, int total_ues, std::uint64_t seed,
                                        double ue_height_units)
{
    if (tbs_list.empty())
        throw ConfigError("generate_ues: TBS list is empty");
    if (total_ues < 0)
        throw ConfigError("generate_ues: UE count must be non-negative");
    for (const auto& t : tbs_list)
        if (!(t.coverage_radius > 0.0))
            throw ConfigError("generate_ues: TBS " + std::to_string(t.id) + " has non-positive coverage radius");

    const int count = int(tbs_list.size());
    std::vector<UserEquipment> ues;
    ues.reserve(std::size_t(total_ues));
    Rng rng(derive_seed(seed, Stream::scene));

    for (int j = 0; j < count; ++j) {
        const Tbs& t = tbs_list[std::size_t(j)];
        const int share = total_ues / count + (j < total_ues % count ? 1 : 0);
        for (int k = 0; k < share; ++k) {
            const double r = t.coverage_radius * std::sqrt(rng.uniform());
            const double phi = 2.0 * std::numbers::pi * rng.uniform();
            UserEquipment ue;
            ue.id = int(ues.size());
            ue.position = Vec3(t.position.x() + r * std::cos(phi), t.position.y() + r * std::sin(phi),
                               ue_height_units);
            ue.origin_tbs = t.id;
            ue.serving = t.id;
            ues.push_back(ue);
        }
    }
    return ues;
}

Scene apply_disaster(const Scene& scene, std::span<const int> tbs_state)
{
    if (tbs_state.size() != scene.tbs.size())
        throw ConfigError("apply_disaster: state vector has " + std::to_string(tbs_state.size())
                          + " entries, scene has " + std::to_string(scene.tbs.size()) + " TBSs");
    Scene out = scene;
    for (std::size_t j = 0; j < out.tbs.size(); ++j) {
        if (tbs_state[j] != 0 && tbs_state[j] != 1)
            throw ConfigError("apply_disaster: state entries must be 0 or 1");
        out.tbs[j].active = out.tbs[j].active && tbs_state[j] == 1;
    }
    for (auto& ue : out.ues) {
        if (!ue.serving)
            continue;
        const int sid = *ue.serving;
        for (const auto& t : out.tbs)
            if (t.id == sid && !t.active)
                ue.serving.reset();
    }
    return out;
}

std::optional<int> select_tbs(const UserEquipment& ue, std::span<const Tbs> tbs_list)
{
    std::optional<int> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& t : tbs_list) {
        if (!t.active)
            continue;
        const double d = distance(t.position, ue.position);
        if (d > t.coverage_radius)
            continue;
        if (d < best_d) {
            best_d = d;
            best = t.id;
        }
    }
    return best;
}

void check_scene(const Scene& scene)
{
    for (std::size_t j = 0; j < scene.tbs.size(); ++j)
        if (scene.tbs[j].id != int(j))
            throw InvariantError("TBS ids must equal their list index");
    for (std::size_t m = 0; m < scene.ues.size(); ++m)
        if (scene.ues[m].id != int(m))
            throw InvariantError("UE ids must equal their list index");
    for (const auto& t : scene.tbs) {
        if (!(t.coverage_radius > 0.0))
            throw InvariantError("TBS " + std::to_string(t.id) + ": coverage radius must be positive");
        if (!(t.position.z() > 0.0))
            throw InvariantError("TBS " + std::to_string(t.id) + ": antenna height must be positive");
        if (!scene.bounds.contains(t.position))
            throw InvariantError("TBS " + std::to_string(t.id) + " lies outside the scene bounds");
    }
    for (const auto& ue : scene.ues) {
        if (!ue.position.allFinite() || ue.position.z() < 0.0)
            throw InvariantError("UE " + std::to_string(ue.id) + ": invalid position");
        if (!scene.bounds.contains(ue.position))
            throw InvariantError("UE " + std::to_string(ue.id) + " lies outside the scene bounds");
        if (!ue.serving)
            continue;
        bool found = false;
        for (const auto& t : scene.tbs)
            if (t.id == *ue.serving) {
                found = true;
                if (!t.active)
                    throw InvariantError("UE " + std::to_string(ue.id) + " is served by inactive TBS");
            }
        if (!found)
            throw InvariantError("UE " + std::to_string(ue.id) + " references unknown TBS");
    }
}

} // namespace uavbs
