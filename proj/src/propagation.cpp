#include "uavbs/propagation.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavbs {

namespace {

void require_positive(double v, const char* field)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("channel.") + field + " must be positive and finite");
}

} // namespace

void ChannelParams::validate() const
{
    require_positive(carrier_hz, "carrier_hz");
    require_positive(tx_power_w, "tx_power_w");
    require_positive(tx_gain, "tx_gain");
    require_positive(rx_gain, "rx_gain");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(tbs_height_m, "tbs_height_m");
    require_positive(ue_height_m, "ue_height_m");
    require_positive(env_alpha, "env_alpha");
    require_positive(env_beta, "env_beta");
    require_positive(mu_los_db, "mu_los_db");
    require_positive(mu_nlos_db, "mu_nlos_db");
    require_positive(impedance_ohm, "impedance_ohm");
    require_positive(light_speed, "light_speed");
    if (!std::isfinite(noise_dbm_per_hz))
        throw ConfigError("channel.noise_dbm_per_hz must be finite");
    if (mu_nlos_db < mu_los_db)
        throw ConfigError("channel.mu_nlos_db must not be below mu_los_db");
}

double two_ray_rx_power(const ChannelParams& p, double distance_m, double h_tx_m, double h_rx_m)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("two_ray_rx_power: distance must be positive");
    const double lambda = p.wavelength();
    const double field = 4.0 * std::numbers::pi * h_tx_m * h_rx_m * std::sqrt(30.0 * p.tx_power_w * p.tx_gain)
                         / (lambda * distance_m * distance_m);
    const double aperture = lambda * lambda * p.rx_gain / (4.0 * std::numbers::pi);
    return linear_to_db(field * field / p.impedance_ohm * aperture);
}

double elevation_angle(const Vec3& uav, const Vec3& ue)
{
    const double d = distance(uav, ue);
    if (!(d > 0.0))
        throw std::domain_error("elevation_angle: UAV coincides with the UE");
    const double s = std::clamp(uav.z() / d, 0.0, 1.0);
    return std::asin(s) * 180.0 / std::numbers::pi;
}

double p_los(const ChannelParams& p, double theta_deg)
{
    return 1.0 / (1.0 + p.env_alpha * std::exp(-p.env_beta * (theta_deg - p.env_alpha)));
}

double free_space_loss(const ChannelParams& p, double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("free_space_loss: distance must be positive");
    return 20.0 * std::log10(4.0 * std::numbers::pi * p.carrier_hz * distance_m / p.light_speed);
}

double a2g_path_loss(const ChannelParams& p, double distance_m, double theta_deg)
{
    const double los = p_los(p, theta_deg);
    return free_space_loss(p, distance_m) + los * p.mu_los_db + (1.0 - los) * p.mu_nlos_db;
}

double noise_power(const ChannelParams& p)
{
    return dbm_to_watts(p.noise_dbm_per_hz + linear_to_db(p.bandwidth_hz));
}

bool uav_in_range(const Transmitters& tx, std::size_t uav, const Vec3& ue)
{
    return distance(tx.uavs[uav], ue) <= tx.uav_range;
}

bool tbs_in_range(const Transmitters& tx, std::size_t tbs, const Vec3& ue)
{
    const Tbs& t = tx.tbs[tbs];
    return t.active && distance(t.position, ue) <= t.coverage_radius;
}

double uav_power_at(const ChannelParams& p, const Transmitters& tx, std::size_t uav, const Vec3& ue)
{
    const Vec3& pos = tx.uavs[uav];
    const double d_m = distance(pos, ue) * tx.scale_m_per_unit;
    return db_to_linear(a2g_rx_power(p, d_m, elevation_angle(pos, ue)));
}

double tbs_power_at(const ChannelParams& p, const Transmitters& tx, std::size_t tbs, const Vec3& ue)
{
    const Tbs& t = tx.tbs[tbs];
    const double d_m = distance(t.position, ue) * tx.scale_m_per_unit;
    return db_to_linear(two_ray_rx_power(p, d_m, t.position.z() * tx.scale_m_per_unit, p.ue_height_m));
}

Server determine_server(const UserEquipment& ue, std::optional<std::size_t> cluster_uav, const Transmitters& tx)
{
    if (ue.serving) {
        for (std::size_t j = 0; j < tx.tbs.size(); ++j)
            if (tx.tbs[j].id == *ue.serving)
                return Server::tbs_at(j);
    }
    if (cluster_uav && uav_in_range(tx, *cluster_uav, ue.position))
        return Server::uav_at(*cluster_uav);
    return {};
}

LinkBudget link_budget(const ChannelParams& p, const Transmitters& tx, const Vec3& ue, Server server)
{
    LinkBudget b;
    b.noise = noise_power(p);
    if (server.kind == Server::Kind::uav)
        b.effective = uav_power_at(p, tx, server.index, ue);
    else if (server.kind == Server::Kind::tbs)
        b.effective = tbs_power_at(p, tx, server.index, ue);

    for (std::size_t k = 0; k < tx.uavs.size(); ++k) {
        if (server.kind == Server::Kind::uav && server.index == k)
            continue;
        if (uav_in_range(tx, k, ue))
            b.interference += uav_power_at(p, tx, k, ue);
    }
    for (std::size_t j = 0; j < tx.tbs.size(); ++j) {
        if (server.kind == Server::Kind::tbs && server.index == j)
            continue;
        if (tbs_in_range(tx, j, ue))
            b.interference += tbs_power_at(p, tx, j, ue);
    }
    b.served = server.kind != Server::Kind::none;
    return b;
}

double rate(const ChannelParams& p, double sinr_value, int receivers)
{
    if (receivers < 1)
        throw std::invalid_argument("rate: receiver count must be at least 1");
    return p.bandwidth_hz / receivers * std::log2(1.0 + sinr_value);
}

} // namespace uavbs
