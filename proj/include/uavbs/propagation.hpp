#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "uavbs/scenario.hpp"
#include "uavbs/types.hpp"

namespace uavbs {

/// Radio constants shared by every transmitter in the scene. Powers are in
/// watts, lengths in meters, angles in degrees.
struct ChannelParams {
    double carrier_hz = 2.0e9;
    double tx_power_w = 4000.0;     // TBS and UAV transmit power
    double tx_gain = 1.0;
    double rx_gain = 1.0;
    double bandwidth_hz = 0.18e6;   // per transmitter
    double noise_dbm_per_hz = -174.0;
    double tbs_height_m = 100.0;
    double ue_height_m = 1.5;
    double env_alpha = 1.0;         // LoS sigmoid constants, degree convention
    double env_beta = 1.0;
    double mu_los_db = 3.0;
    double mu_nlos_db = 23.0;
    double impedance_ohm = 376.73;
    double light_speed = 3.0e8;
    int table_n = 5;                // listed with the environment table; not consumed

    double wavelength() const { return light_speed / carrier_hz; }

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    bool operator==(const ChannelParams&) const = default;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }

/// G2G received power (dBW) from the two-ray ground model:
/// 10 log10(|E|^2 / eta * A_r), E = 4 pi h_tx h_rx sqrt(30 P_t G_t) / (lambda d^2),
/// A_r = lambda^2 G_r / (4 pi).
double two_ray_rx_power(const ChannelParams& p, double distance_m, double h_tx_m, double h_rx_m);

/// Elevation of the UAV seen from the UE, degrees in [0, 90].
double elevation_angle(const Vec3& uav, const Vec3& ue);

double p_los(const ChannelParams& p, double theta_deg);
inline double p_nlos(const ChannelParams& p, double theta_deg) { return 1.0 - p_los(p, theta_deg); }

double free_space_loss(const ChannelParams& p, double distance_m);

/// A2G path loss (dB): free-space term plus the LoS/NLoS excess mixture.
double a2g_path_loss(const ChannelParams& p, double distance_m, double theta_deg);

/// A2G received power (dBW).
inline double a2g_rx_power(const ChannelParams& p, double distance_m, double theta_deg)
{
    return linear_to_db(p.tx_power_w) - a2g_path_loss(p, distance_m, theta_deg);
}

double noise_power(const ChannelParams& p); // watts over the per-transmitter band

/// Every transmitter visible to a UE. Positions in grid units.
struct Transmitters {
    std::span<const Tbs> tbs;
    std::span<const Vec3> uavs;
    double uav_range = 0.0; // grid units
    double scale_m_per_unit = 20.0;
};

/// Linear received power (W) from UAV or TBS at a UE.
double uav_power_at(const ChannelParams& p, const Transmitters& tx, std::size_t uav, const Vec3& ue);
double tbs_power_at(const ChannelParams& p, const Transmitters& tx, std::size_t tbs, const Vec3& ue);

bool uav_in_range(const Transmitters& tx, std::size_t uav, const Vec3& ue);
bool tbs_in_range(const Transmitters& tx, std::size_t tbs, const Vec3& ue);

struct Server {
    enum class Kind { none, tbs, uav };
    Kind kind = Kind::none;
    std::size_t index = 0; // into Transmitters::tbs or ::uavs

    static Server tbs_at(std::size_t i) { return {Kind::tbs, i}; }
    static Server uav_at(std::size_t i) { return {Kind::uav, i}; }
};

/// A TBS-connected UE keeps its TBS; otherwise its cluster's UAV if in range.
Server determine_server(const UserEquipment& ue, std::optional<std::size_t> cluster_uav, const Transmitters& tx);

struct LinkBudget {
    double effective = 0.0;    // W
    double interference = 0.0; // W
    double noise = 0.0;        // W
    bool served = false;
};

/// Serving power plus the sum of every other in-range transmitter. Out-of-range
/// UAVs and inactive or out-of-range TBSs contribute nothing.
LinkBudget link_budget(const ChannelParams& p, const Transmitters& tx, const Vec3& ue, Server server);

inline double sinr(const LinkBudget& b) { return b.effective / (b.interference + b.noise); }

/// Shannon rate with the transmitter band split across its receivers (bit/s).
double rate(const ChannelParams& p, double sinr_value, int receivers);

} // namespace uavbs
