#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "uavbs/propagation.hpp"
#include "uavbs/rng.hpp"

using namespace uavbs;
using namespace oracle::frozen;

TEST_CASE("two-ray received power")
{
    const ChannelParams p;
    CHECK(two_ray_rx_power(p, 1000.0, 100.0, 1.5) == doctest::Approx(kTwoRay1000).epsilon(1e-12));
    CHECK(two_ray_rx_power(p, 2000.0, 100.0, 1.5) == doctest::Approx(kTwoRay2000).epsilon(1e-12));
    CHECK(two_ray_rx_power(p, 1000.0, 100.0, 1.5) == doctest::Approx(-40.5).epsilon(0.01));

    SUBCASE("fourth-power distance law")
    {
        for (double d : {10.0, 333.0, 1000.0, 4321.0})
            CHECK(two_ray_rx_power(p, d, 100, 1.5) - two_ray_rx_power(p, 2 * d, 100, 1.5)
                  == doctest::Approx(10.0 * std::log10(16.0)).epsilon(1e-12));
    }
    SUBCASE("100x transmit power is +20 dB")
    {
        ChannelParams hot = p;
        hot.tx_power_w *= 100.0;
        for (double d : {50.0, 1000.0, 2400.0})
            CHECK(std::abs(two_ray_rx_power(hot, d, 100, 1.5) - two_ray_rx_power(p, d, 100, 1.5) - 20.0) < 1e-12);
    }
    CHECK_THROWS_AS(two_ray_rx_power(p, 0.0, 100, 1.5), std::domain_error);
    CHECK_THROWS_AS(two_ray_rx_power(p, -5.0, 100, 1.5), std::domain_error);
}

TEST_CASE("elevation angle")
{
    CHECK(elevation_angle(Vec3(3, 4, 10), Vec3(3, 4, 0)) == doctest::Approx(90.0).epsilon(1e-12));
    // altitude = distance / 2
    CHECK(elevation_angle(Vec3(std::sqrt(3.0), 0, 1), Vec3(0, 0, 0)) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK_THROWS_AS(elevation_angle(Vec3(1, 1, 0), Vec3(1, 1, 0)), std::domain_error);

    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 uav(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0.1, 60));
        const Vec3 ue(rng.uniform(-50, 50), rng.uniform(-50, 50), 0.075);
        const double h = std::hypot(uav.x() - ue.x(), uav.y() - ue.y());
        const double expect = std::atan2(uav.z(), h) * 180.0 / std::numbers::pi;
        CHECK(std::abs(elevation_angle(uav, ue) - expect) <= 1e-9);
    }
}

TEST_CASE("LoS probability")
{
    const ChannelParams p;
    CHECK(p_los(p, 1.0) == 0.5);
    CHECK(std::abs(p_los(p, 90.0) - 1.0) <= 1e-12);
    CHECK(p_los(p, p.env_alpha) == 1.0 / (1.0 + p.env_alpha));

    Rng rng(3);
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double theta = rng.uniform(0.0, 90.0);
        CHECK(std::abs(p_los(p, theta) + p_nlos(p, theta) - 1.0) <= 1e-12);
    }
    for (double theta = 0.0; theta <= 90.0; theta += 0.25) {
        CHECK(p_los(p, theta) >= prev);
        prev = p_los(p, theta);
    }
}

TEST_CASE("free-space and air-to-ground path loss")
{
    const ChannelParams p;
    CHECK(std::abs(free_space_loss(p, 1000.0) - kFreeSpace1000) <= 1e-6);
    CHECK(free_space_loss(p, 1000.0) == doctest::Approx(98.5).epsilon(0.001));
    CHECK(std::abs(a2g_path_loss(p, 500.0, 45.0) - kPathLoss500At45) <= 1e-6);
    CHECK(std::abs(a2g_path_loss(p, 1000.0, 90.0) - kPathLoss1000At90) <= 1e-6);
    CHECK(std::abs(a2g_path_loss(p, 1000.0, 90.0) - free_space_loss(p, 1000.0) - p.mu_los_db) <= 1e-6);

    for (double theta : {0.0, 10.0, 45.0, 90.0}) {
        double prev = -1e300;
        for (double d = 1.0; d < 1e5; d *= 1.7) {
            const double l = a2g_path_loss(p, d, theta);
            CHECK(l > prev);
            prev = l;
        }
    }
    CHECK_THROWS_AS(free_space_loss(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(a2g_path_loss(p, 0.0, 30.0), std::domain_error);
}

TEST_CASE("air-to-ground received power")
{
    ChannelParams p;
    CHECK(std::abs(a2g_rx_power(p, 500.0, 45.0) - kRxPower500At45) <= 1e-6);

    // Transmit power equal to the loss cancels to 0 dBW.
    p.tx_power_w = db_to_linear(a2g_path_loss(p, 750.0, 20.0));
    CHECK(std::abs(a2g_rx_power(p, 750.0, 20.0)) <= 1e-9);

    const ChannelParams q;
    for (double theta : {5.0, 30.0, 80.0})
        CHECK(a2g_rx_power(q, 400.0, theta) - a2g_rx_power(q, 800.0, theta)
              == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("dB conversions and noise")
{
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::exp(rng.uniform(-60.0, 60.0));
        CHECK(std::abs(db_to_linear(linear_to_db(x)) - x) <= 1e-9 * x);
        const double db = rng.uniform(-300.0, 300.0);
        CHECK(std::abs(linear_to_db(db_to_linear(db)) - db) <= 1e-9 * std::max(1.0, std::abs(db)));
    }
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
    const ChannelParams p;
    CHECK(linear_to_db(noise_power(p)) == doctest::Approx(kNoiseDbw).epsilon(1e-12));
}

TEST_CASE("rate")
{
    const ChannelParams p;
    CHECK(rate(p, 1.0, 1) == doctest::Approx(0.18e6));
    CHECK(rate(p, 0.0, 3) == 0.0);
    for (double s : {0.3, 1.0, 17.0, 1e4})
        CHECK(rate(p, s, 8) == doctest::Approx(rate(p, s, 4) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(rate(p, 1.0, 0), std::invalid_argument);
}

TEST_CASE("channel parameter validation")
{
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    p.mu_nlos_db = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ChannelParams{};
    p.bandwidth_hz = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("bandwidth_hz"), ConfigError);
    p = ChannelParams{};
    p.carrier_hz = 2e6; // the alternative reading stays configurable
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("link budget: lone TBS has no interference")
{
    const ChannelParams p;
    const std::vector<Tbs> tbs{Tbs{0, Vec3(0, 0, 5), 120, true}};
    Transmitters tx;
    tx.tbs = tbs;
    tx.uav_range = 60;
    const Vec3 ue(30, 40, 0.075);
    const LinkBudget b = link_budget(p, tx, ue, Server::tbs_at(0));
    CHECK(b.interference == 0.0);
    CHECK(b.served);
    CHECK(sinr(b) == b.effective / b.noise);
    CHECK(b.effective == doctest::Approx(db_to_linear(two_ray_rx_power(p, std::sqrt(2500.0 + 25.0) * 20, 100, 1.5))));
}

TEST_CASE("link budget: UE in a neighbouring cell served by its cluster UAV")
{
    // UE2 lost its own station, is in reach of TBS2, UAV3 and UAV4, and
    // belongs to UAV4's cluster: TBS2 and UAV3 interfere.
    const ChannelParams p;
    const std::vector<Tbs> tbs{Tbs{0, Vec3(-200, 0, 5), 120, true}, Tbs{1, Vec3(100, 0, 5), 100, true}};
    const std::vector<Vec3> uavs{Vec3(500, 500, 3), Vec3(-20, 30, 4), Vec3(10, 20, 2)};
    Transmitters tx;
    tx.tbs = tbs;
    tx.uavs = uavs;
    tx.uav_range = 60;
    UserEquipment ue2;
    ue2.position = Vec3(5, 0, 0.075);
    REQUIRE(tbs_in_range(tx, 1, ue2.position));
    REQUIRE_FALSE(tbs_in_range(tx, 0, ue2.position));
    REQUIRE(uav_in_range(tx, 1, ue2.position));
    REQUIRE(uav_in_range(tx, 2, ue2.position));
    REQUIRE_FALSE(uav_in_range(tx, 0, ue2.position));

    const Server s = determine_server(ue2, 2, tx);
    REQUIRE(s.kind == Server::Kind::uav);
    CHECK(s.index == 2);
    const LinkBudget b = link_budget(p, tx, ue2.position, s);
    const double p_rb22 = tbs_power_at(p, tx, 1, ue2.position);
    const double p_r32 = uav_power_at(p, tx, 1, ue2.position);
    CHECK(b.interference == doctest::Approx(p_rb22 + p_r32).epsilon(1e-14));
    CHECK(b.effective == uav_power_at(p, tx, 2, ue2.position));
}

TEST_CASE("link budget: serving-station choice")
{
    const std::vector<Tbs> tbs{Tbs{0, Vec3(0, 0, 5), 120, true}};
    const std::vector<Vec3> uavs{Vec3(10, 0, 3)};
    Transmitters tx;
    tx.tbs = tbs;
    tx.uavs = uavs;
    tx.uav_range = 60;
    UserEquipment ue;
    ue.position = Vec3(5, 0, 0);
    ue.serving = 0;
    CHECK(determine_server(ue, 0, tx).kind == Server::Kind::tbs);
    ue.serving.reset();
    CHECK(determine_server(ue, 0, tx).kind == Server::Kind::uav);
    CHECK(determine_server(ue, std::nullopt, tx).kind == Server::Kind::none);
    ue.position = Vec3(200, 0, 0);
    CHECK(determine_server(ue, 0, tx).kind == Server::Kind::none);
    const LinkBudget none = link_budget(ChannelParams{}, tx, ue.position, Server{});
    CHECK(none.effective == 0.0);
    CHECK_FALSE(none.served);
}

TEST_CASE("link budget: interference equals an exhaustive per-transmitter sum")
{
    const ChannelParams p;
    Rng rng(555);
    const double scale = 20.0;
    double worst = 0.0;
    int nonzero = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Tbs> tbs;
        const int nt = int(rng.below(4));
        for (int j = 0; j < nt; ++j)
            tbs.push_back(Tbs{j, Vec3(rng.uniform(0, 200), rng.uniform(0, 200), 5), rng.uniform(20, 150),
                              rng.uniform() < 0.6});
        std::vector<Vec3> uavs;
        const int nu = 1 + int(rng.below(8));
        for (int k = 0; k < nu; ++k)
            uavs.emplace_back(rng.between(0, 200), rng.between(0, 200), rng.between(1, 10));
        Transmitters tx;
        tx.tbs = tbs;
        tx.uavs = uavs;
        tx.uav_range = 60;
        tx.scale_m_per_unit = scale;

        const Vec3 ue(rng.uniform(0, 200), rng.uniform(0, 200), 0.075);
        const Server server = Server::uav_at(rng.below(std::uint64_t(nu)));
        const LinkBudget b = link_budget(p, tx, ue, server);

        double expect = 0.0;
        for (int k = 0; k < nu; ++k) {
            const double d = std::hypot(std::hypot(uavs[k].x() - ue.x(), uavs[k].y() - ue.y()), uavs[k].z());
            if (std::size_t(k) != server.index && d <= 60.0)
                expect += oracle::uav_watts(p, uavs[k], ue, scale);
        }
        for (const auto& t : tbs) {
            const double d = std::hypot(std::hypot(t.position.x() - ue.x(), t.position.y() - ue.y()), t.position.z());
            if (t.active && d <= t.coverage_radius)
                expect += oracle::tbs_watts(p, t, ue, scale);
        }
        if (expect == 0.0) {
            CHECK(b.interference == 0.0);
            continue;
        }
        ++nonzero;
        worst = std::max(worst, std::abs(b.interference - expect) / expect);
    }
    CHECK(nonzero > 100);
    CHECK(worst <= 1e-12);
}

TEST_CASE("SINR monotonicity")
{
    LinkBudget b{1e-9, 1e-10, 1e-14, true};
    const double base = sinr(b);
    LinkBudget more_i = b;
    more_i.interference *= 2;
    LinkBudget more_n = b;
    more_n.noise *= 2;
    LinkBudget more_e = b;
    more_e.effective *= 2;
    CHECK(sinr(more_i) <= base);
    CHECK(sinr(more_n) <= base);
    CHECK(sinr(more_e) >= base);
}
