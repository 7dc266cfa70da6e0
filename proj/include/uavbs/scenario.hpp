#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "uavbs/types.hpp"

namespace uavbs {

struct Tbs {
    int id = 0;
    Vec3 position = Vec3::Zero(); // z is the antenna height in grid units
    double coverage_radius = 0.0; // grid units
    bool active = true;
};

struct UserEquipment {
    int id = 0;
    Vec3 position = Vec3::Zero(); // z is the handset height in grid units
    int origin_tbs = -1;          // TBS whose coverage disc generated this UE
    std::optional<int> serving;   // id of the single serving base station

    // Connection state: at most one serving station by construction.
    int cs() const { return serving ? 1 : 0; }
};

struct Scene {
    Box3 bounds;
    double scale_m_per_unit = 20.0;
    std::vector<Tbs> tbs;
    std::vector<UserEquipment> ues;
    std::uint64_t seed = 0;

    double to_meters(double units) const { return units * scale_m_per_unit; }
    double to_units(double meters) const { return meters / scale_m_per_unit; }

    std::vector<int> unserved_ids() const;
};

/// Homogeneous PPP realization conditioned on a fixed total: TBS `j` receives
/// `total / J` UEs plus one of the remainder when `j < total % J`, each drawn
/// uniformly on its coverage disc by inverse-CDF radius sampling. Every UE
/// starts connected to the TBS that generated it.
std::vector<UserEquipment> generate_ues(std::span<const Tbs> tbs_list, int total_ues, std::uint64_t seed,
                                        double ue_height_units);

/// Applies a per-TBS up/down vector; UEs of failed stations lose service.
Scene apply_disaster(const Scene& scene, std::span<const int> tbs_state);

/// Base-station to UE distance with the UE projected to the ground:
/// sqrt((xb - xm)^2 + (yb - ym)^2 + zb^2).
inline double distance(const Vec3& base, const Vec3& ue)
{
    const double dx = base.x() - ue.x();
    const double dy = base.y() - ue.y();
    return std::sqrt(dx * dx + dy * dy + base.z() * base.z());
}

/// Nearest active TBS within its coverage radius; lowest id wins exact ties.
std::optional<int> select_tbs(const UserEquipment& ue, std::span<const Tbs> tbs_list);

/// Throws InvariantError if any UE violates the single-server rule, references
/// an unknown or inactive TBS, or any position leaves the scene bounds.
void check_scene(const Scene& scene);

} // namespace uavbs
