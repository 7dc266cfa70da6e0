#pragma once

#include <span>
#include <vector>

#include "uavbs/propagation.hpp"
#include "uavbs/scenario.hpp"
#include "uavbs/types.hpp"

namespace uavbs {

/// Counts, per UAV, the cluster members it serves at or above the rate
/// threshold given every UAV's position. Interference comes from the other
/// UAVs in range and from active TBSs in range; the transmitter band is split
/// across the members within the serving UAV's range.
class CoverageModel {
public:
    CoverageModel(const Scene& scene, const ChannelParams& params, std::vector<std::vector<int>> members,
                  double uav_range_units, double rate_threshold);

    std::size_t uav_count() const { return members_.size(); }
    int member_count(std::size_t uav) const { return int(members_[uav].size()); }
    const std::vector<int>& members(std::size_t uav) const { return members_[uav]; }
    double uav_range() const { return uav_range_; }
    double rate_threshold() const { return rate_threshold_; }
    const Scene& scene() const { return *scene_; }
    const ChannelParams& params() const { return params_; }

    /// Served member count M_n for every UAV.
    std::vector<int> served_counts(std::span<const Cell> uavs) const;

    /// Reusable evaluation state. Rows of received power are recomputed only
    /// for UAVs whose cell changed since the previous call.
    class Evaluator {
    public:
        explicit Evaluator(const CoverageModel& model);
        const std::vector<int>& served_counts(std::span<const Cell> uavs);

    private:
        void refresh_row(std::size_t uav, const Cell& cell);

        const CoverageModel* model_;
        std::vector<Cell> cells_;
        std::vector<bool> valid_;
        std::vector<std::vector<double>> power_; // [uav][ue slot], 0 when out of range
        std::vector<std::vector<char>> in_range_;
        std::vector<int> counts_;
    };

private:
    friend class Evaluator;

    const Scene* scene_;
    ChannelParams params_;
    std::vector<std::vector<int>> members_;
    double uav_range_;
    double rate_threshold_;
    double noise_;
    // Every member UE, compacted: position, owning UAV, static TBS interference.
    std::vector<Vec3> ue_pos_;
    std::vector<std::size_t> ue_owner_;
    std::vector<double> ue_tbs_interference_;
    std::vector<std::vector<std::size_t>> slots_; // [uav] -> slots of its members
};

/// Direct per-UE evaluation through link_budget; independent of the cached
/// path and used to cross-check it.
std::vector<int> served_counts_direct(const CoverageModel& model, std::span<const Cell> uavs);

} // namespace uavbs
