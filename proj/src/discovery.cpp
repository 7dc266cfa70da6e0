#include "uavbs/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "uavbs/cf_tree.hpp"

namespace uavbs {

SweepResult zigzag_sweep(const Scene& scene, double interval)
{
    if (!(interval > 0.0))
        throw ConfigError("zigzag_sweep: interval must be positive");
    const double x0 = scene.bounds.lo.x(), x1 = scene.bounds.hi.x();
    const double y0 = scene.bounds.lo.y(), y1 = scene.bounds.hi.y();
    const double extent = y1 - y0;

    SweepResult out;
    out.rows = std::max(1, int(std::ceil(extent / interval)) + 1);
    out.row_spacing = out.rows > 1 ? extent / (out.rows - 1) : 0.0;
    for (int r = 0; r < out.rows; ++r) {
        const double y = y0 + r * out.row_spacing;
        const bool forward = r % 2 == 0;
        out.waypoints.emplace_back(forward ? x0 : x1, y);
        out.waypoints.emplace_back(forward ? x1 : x0, y);
    }

    // Row r listens over the band |y - y_r| <= spacing / 2; the earliest row wins.
    std::vector<std::pair<int, int>> found; // (row, id)
    for (const auto& ue : scene.ues) {
        if (ue.cs() != 0)
            continue;
        int row = 0;
        if (out.rows > 1) {
            const double t = (ue.position.y() - y0) / out.row_spacing;
            row = std::clamp(int(std::ceil(t - 0.5)), 0, out.rows - 1);
        }
        found.emplace_back(row, ue.id);
    }
    std::sort(found.begin(), found.end());
    for (const auto& [row, id] : found)
        out.discovered.push_back(scene.ues[std::size_t(id)]);
    return out;
}

namespace {

void refine(const std::vector<int>& members, const std::map<int, Vec2>& where, double threshold,
            const ClusteringOptions& opts, std::vector<Cluster>& out)
{
    std::vector<Vec2> pts;
    pts.reserve(members.size());
    for (int id : members)
        pts.push_back(where.at(id));
    const Circle<double> circle = minimal_enclosing_circle(pts);
    if (circle.radius <= opts.max_circle_radius) {
        out.push_back(Cluster{members, circle});
        return;
    }
    std::vector<int> ids = members;
    std::sort(ids.begin(), ids.end());
    std::vector<Vec2> sorted_pts;
    for (int id : ids)
        sorted_pts.push_back(where.at(id));
    const double half = threshold / 2.0;
    for (const auto& sub : birch_clusters(sorted_pts, ids, half, opts.branching, opts.leaf_size))
        refine(sub, where, half, opts, out);
}

} // namespace

std::vector<Cluster> cluster_ues(const std::vector<UserEquipment>& discovered, const ClusteringOptions& opts)
{
    if (!(opts.max_circle_radius >= 0.0))
        throw ConfigError("clustering.max_circle_radius must be non-negative");
    std::map<int, Vec2> where;
    for (const auto& ue : discovered)
        where.emplace(ue.id, ue.position.head<2>());

    std::vector<int> ids;
    std::vector<Vec2> pts;
    for (const auto& [id, p] : where) {
        ids.push_back(id);
        pts.push_back(p);
    }
    std::vector<Cluster> out;
    if (ids.empty())
        return out;
    for (const auto& members : birch_clusters(pts, ids, opts.threshold, opts.branching, opts.leaf_size))
        refine(members, where, opts.threshold, opts, out);
    return out;
}

CellBox lattice_bounds(const Scene& scene, AltitudeBand band)
{
    CellBox box;
    box.lo = Cell(int(std::ceil(scene.bounds.lo.x())), int(std::ceil(scene.bounds.lo.y())),
                  std::max(band.lo, int(std::ceil(scene.bounds.lo.z()))));
    box.hi = Cell(int(std::floor(scene.bounds.hi.x())), int(std::floor(scene.bounds.hi.y())),
                  std::min(band.hi, int(std::floor(scene.bounds.hi.z()))));
    return box;
}

Cell random_cell(Rng& rng, const CellBox& box)
{
    return Cell(rng.between(box.lo.x(), box.hi.x()), rng.between(box.lo.y(), box.hi.y()),
                rng.between(box.lo.z(), box.hi.z()));
}

std::vector<Cell> distinct_random_cells(std::vector<Rng>& streams, const std::vector<CellBox>& boxes)
{
    std::vector<Cell> cells;
    cells.reserve(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto taken = std::count_if(cells.begin(), cells.end(), [&](const Cell& c) { return boxes[i].contains(c); });
        if (taken >= cell_count(boxes[i]))
            throw InvariantError("workspace too small for distinct UAV positions");
        Cell c;
        do {
            c = random_cell(streams[i], boxes[i]);
        } while (std::find(cells.begin(), cells.end(), c) != cells.end());
        cells.push_back(c);
    }
    return cells;
}

std::vector<Assignment> assign_uavs(const std::vector<Cluster>& clusters, const Scene& scene, AltitudeBand band,
                                    std::uint64_t seed)
{
    const CellBox limits = lattice_bounds(scene, band);
    if (limits.empty())
        throw ConfigError("altitude band does not intersect the scene bounds");

    std::vector<Assignment> out;
    std::vector<CellBox> boxes;
    std::vector<Rng> streams;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const Cluster& cl = clusters[i];
        if (cl.members.empty())
            throw InvariantError("cluster " + std::to_string(i) + " has no members");
        Assignment a;
        a.uav_id = int(i);
        a.members = cl.members;
        std::sort(a.members.begin(), a.members.end());
        a.circle = cl.circle;
        const Vec2& c = cl.circle.center;
        const double r = cl.circle.radius;
        a.workspace.lo = Cell(std::max(limits.lo.x(), int(std::floor(c.x() - r))),
                              std::max(limits.lo.y(), int(std::floor(c.y() - r))), limits.lo.z());
        a.workspace.hi = Cell(std::min(limits.hi.x(), int(std::ceil(c.x() + r))),
                              std::min(limits.hi.y(), int(std::ceil(c.y() + r))), limits.hi.z());
        if (a.workspace.empty())
            throw InvariantError("cluster " + std::to_string(i) + " workspace lies outside the scene");
        boxes.push_back(a.workspace);
        streams.emplace_back(derive_seed(seed, Stream::initial_position, std::uint32_t(i)));
        out.push_back(std::move(a));
    }
    const auto cells = distinct_random_cells(streams, boxes);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].initial = cells[i];
    return out;
}

std::vector<Assignment> undivided_workspaces(std::vector<Assignment> assignments, const Scene& scene,
                                             AltitudeBand band)
{
    const CellBox limits = lattice_bounds(scene, band);
    for (auto& a : assignments) {
        std::map<int, int> votes;
        for (int id : a.members)
            ++votes[scene.ues[std::size_t(id)].origin_tbs];
        int origin = votes.begin()->first, best = 0;
        for (const auto& [tbs, n] : votes)
            if (n > best) {
                best = n;
                origin = tbs;
            }
        const Tbs& t = scene.tbs[std::size_t(origin)];
        const double r = t.coverage_radius;
        a.workspace.lo = Cell(std::max(limits.lo.x(), int(std::floor(t.position.x() - r))),
                              std::max(limits.lo.y(), int(std::floor(t.position.y() - r))), limits.lo.z());
        a.workspace.hi = Cell(std::min(limits.hi.x(), int(std::ceil(t.position.x() + r))),
                              std::min(limits.hi.y(), int(std::ceil(t.position.y() + r))), limits.hi.z());
    }
    return assignments;
}

} // namespace uavbs
