#pragma once

#include <cstdint>
#include <vector>

#include "uavbs/geometry.hpp"
#include "uavbs/rng.hpp"
#include "uavbs/scenario.hpp"
#include "uavbs/types.hpp"

namespace uavbs {

inline Circle<double> minimal_enclosing_circle(const std::vector<Vec2>& pts)
{
    return minimal_enclosing_circle<double>(std::span<const Vec2>(pts));
}

struct SweepResult {
    std::vector<Vec2> waypoints; // boustrophedon turn points, path order
    int rows = 0;
    double row_spacing = 0.0;
    std::vector<UserEquipment> discovered;
};

/// Flies a zigzag over the scene's horizontal extent with row spacing at most
/// `interval` and collects every UE that answers the broadcast (cs = 0).
/// Discovered UEs are ordered by the row that first reaches them, then by id.
SweepResult zigzag_sweep(const Scene& scene, double interval);

struct ClusteringOptions {
    double threshold = 60.0;        // CF leaf radius bound, grid units
    int branching = 8;
    int leaf_size = 8;
    double max_circle_radius = 60.0; // clusters wider than this are re-split
};

struct Cluster {
    std::vector<int> members; // UE ids
    Circle<double> circle;
};

/// CF-tree clustering of the discovered UEs (inserted by ascending id) followed
/// by a minimal enclosing circle per leaf entry. A leaf entry's RMS radius does
/// not bound its enclosing circle, so any cluster whose circle exceeds
/// `max_circle_radius` is rebuilt from its own members with half the threshold
/// until every circle fits.
std::vector<Cluster> cluster_ues(const std::vector<UserEquipment>& discovered, const ClusteringOptions& opts);

struct AltitudeBand {
    int lo = 1;
    int hi = 10;
};

struct Assignment {
    int uav_id = 0;
    std::vector<int> members;
    Circle<double> circle;
    CellBox workspace;
    Cell initial = Cell::Zero();
};

/// Lattice cells the scene bounds allow.
CellBox lattice_bounds(const Scene& scene, AltitudeBand band);

/// One workspace per cluster: the circle's bounding square on the lattice,
/// clipped to the scene, over the altitude band. Initial positions are drawn
/// uniformly per UAV and kept pairwise distinct.
std::vector<Assignment> assign_uavs(const std::vector<Cluster>& clusters, const Scene& scene, AltitudeBand band,
                                    std::uint64_t seed);

/// Baseline without workspace division: each UAV keeps its members but may fly
/// over the whole coverage square of the failed TBS that generated most of them.
std::vector<Assignment> undivided_workspaces(std::vector<Assignment> assignments, const Scene& scene,
                                             AltitudeBand band);

Cell random_cell(Rng& rng, const CellBox& box);

/// Uniform cells per UAV, redrawn from the same stream until distinct from
/// every earlier UAV's cell.
std::vector<Cell> distinct_random_cells(std::vector<Rng>& streams, const std::vector<CellBox>& boxes);

} // namespace uavbs
