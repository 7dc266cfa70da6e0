#include "uavbs/coverage.hpp"

#include <string>

namespace uavbs {

namespace {

Vec3 to_vec(const Cell& c) { return c.cast<double>(); }

} // namespace

CoverageModel::CoverageModel(const Scene& scene, const ChannelParams& params, std::vector<std::vector<int>> members,
                             double uav_range_units, double rate_threshold)
    : scene_(&scene),
      params_(params),
      members_(std::move(members)),
      uav_range_(uav_range_units),
      rate_threshold_(rate_threshold),
      noise_(noise_power(params))
{
    if (!(uav_range_units > 0.0))
        throw ConfigError("UAV range must be positive");
    if (!(rate_threshold >= 0.0))
        throw ConfigError("rate threshold must be non-negative");

    Transmitters tx;
    tx.tbs = scene.tbs;
    tx.scale_m_per_unit = scene.scale_m_per_unit;
    tx.uav_range = uav_range_;

    slots_.resize(members_.size());
    for (std::size_t n = 0; n < members_.size(); ++n) {
        if (members_[n].empty())
            throw InvariantError("UAV " + std::to_string(n) + " has an empty cluster");
        for (int id : members_[n]) {
            if (id < 0 || std::size_t(id) >= scene.ues.size())
                throw InvariantError("cluster member " + std::to_string(id) + " is not a scene UE");
            const Vec3& pos = scene.ues[std::size_t(id)].position;
            double tbs_sum = 0.0;
            for (std::size_t j = 0; j < scene.tbs.size(); ++j)
                if (tbs_in_range(tx, j, pos))
                    tbs_sum += tbs_power_at(params_, tx, j, pos);
            slots_[n].push_back(ue_pos_.size());
            ue_pos_.push_back(pos);
            ue_owner_.push_back(n);
            ue_tbs_interference_.push_back(tbs_sum);
        }
    }
}

std::vector<int> CoverageModel::served_counts(std::span<const Cell> uavs) const
{
    Evaluator eval(*this);
    return eval.served_counts(uavs);
}

CoverageModel::Evaluator::Evaluator(const CoverageModel& model)
    : model_(&model),
      cells_(model.uav_count(), Cell::Zero()),
      valid_(model.uav_count(), false),
      power_(model.uav_count(), std::vector<double>(model.ue_pos_.size(), 0.0)),
      in_range_(model.uav_count(), std::vector<char>(model.ue_pos_.size(), 0)),
      counts_(model.uav_count(), 0)
{
}

void CoverageModel::Evaluator::refresh_row(std::size_t uav, const Cell& cell)
{
    const CoverageModel& m = *model_;
    const Vec3 pos = to_vec(cell);
    const double scale = m.scene_->scale_m_per_unit;
    auto& power = power_[uav];
    auto& in_range = in_range_[uav];
    for (std::size_t u = 0; u < m.ue_pos_.size(); ++u) {
        const double d = distance(pos, m.ue_pos_[u]);
        if (d <= m.uav_range_) {
            in_range[u] = 1;
            power[u] = db_to_linear(a2g_rx_power(m.params_, d * scale, elevation_angle(pos, m.ue_pos_[u])));
        } else {
            in_range[u] = 0;
            power[u] = 0.0;
        }
    }
    cells_[uav] = cell;
    valid_[uav] = true;
}

const std::vector<int>& CoverageModel::Evaluator::served_counts(std::span<const Cell> uavs)
{
    const CoverageModel& m = *model_;
    if (uavs.size() != m.uav_count())
        throw std::invalid_argument("served_counts: one cell per UAV required");
    for (std::size_t n = 0; n < uavs.size(); ++n)
        if (!valid_[n] || cells_[n] != uavs[n])
            refresh_row(n, uavs[n]);

    for (std::size_t n = 0; n < uavs.size(); ++n) {
        int connected = 0;
        for (std::size_t u : m.slots_[n])
            connected += in_range_[n][u];
        int served = 0;
        for (std::size_t u : m.slots_[n]) {
            if (!in_range_[n][u])
                continue;
            double interference = 0.0;
            for (std::size_t k = 0; k < uavs.size(); ++k)
                if (k != n)
                    interference += power_[k][u];
            interference += m.ue_tbs_interference_[u];
            const double s = power_[n][u] / (interference + m.noise_);
            if (rate(m.params_, s, connected) >= m.rate_threshold_)
                ++served;
        }
        counts_[n] = served;
    }
    return counts_;
}

std::vector<int> served_counts_direct(const CoverageModel& model, std::span<const Cell> uavs)
{
    const Scene& scene = model.scene();
    std::vector<Vec3> positions;
    for (const auto& c : uavs)
        positions.push_back(c.cast<double>());
    Transmitters tx;
    tx.tbs = scene.tbs;
    tx.uavs = positions;
    tx.uav_range = model.uav_range();
    tx.scale_m_per_unit = scene.scale_m_per_unit;

    std::vector<int> counts(uavs.size(), 0);
    for (std::size_t n = 0; n < uavs.size(); ++n) {
        int connected = 0;
        for (int id : model.members(n))
            if (uav_in_range(tx, n, scene.ues[std::size_t(id)].position))
                ++connected;
        for (int id : model.members(n)) {
            const UserEquipment& ue = scene.ues[std::size_t(id)];
            const Server server = determine_server(ue, n, tx);
            if (server.kind != Server::Kind::uav)
                continue;
            const LinkBudget b = link_budget(model.params(), tx, ue.position, server);
            if (rate(model.params(), sinr(b), connected) >= model.rate_threshold())
                ++counts[n];
        }
    }
    return counts;
}

} // namespace uavbs
