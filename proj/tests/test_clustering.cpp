#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "uavbs/cf_tree.hpp"
#include "uavbs/config.hpp"
#include "uavbs/discovery.hpp"
#include "uavbs/experiment.hpp"
#include "uavbs/rng.hpp"

using namespace uavbs;

namespace {

Scene square_scene(double side)
{
    Scene s;
    s.bounds.lo = Vec3(0, 0, 0);
    s.bounds.hi = Vec3(side, side, side / 2);
    s.tbs.push_back(Tbs{0, Vec3(side / 2, side / 2, 5), side, false});
    return s;
}

UserEquipment unserved(int id, double x, double y)
{
    UserEquipment u;
    u.id = id;
    u.position = Vec3(x, y, 0.075);
    u.origin_tbs = 0;
    return u;
}

} // namespace

TEST_CASE("CF: merged radius follows sqrt(ss/n - |ls/n|^2)")
{
    CfTree t(1.0);
    t.insert(Vec2(0, 0), 0);
    t.insert(Vec2(1, 0), 1);
    auto c = t.clusters();
    REQUIRE(c.size() == 1);
    const auto& leaf = t.node(t.root());
    REQUIRE(leaf.entries.size() == 1);
    CHECK(leaf.entries[0].cf.radius() == doctest::Approx(0.5));
    CHECK(leaf.entries[0].cf.n == 2);

    t.insert(Vec2(10, 0), 2);
    c = t.clusters();
    CHECK(c.size() == 2);
    CHECK(t.size() == 3);
}

TEST_CASE("CF: identical points form one zero-radius entry")
{
    CfTree t(0.5);
    for (int i = 0; i < 50; ++i)
        t.insert(Vec2(3.25, -7.5), i);
    const auto c = t.clusters();
    REQUIRE(c.size() == 1);
    CHECK(c[0].size() == 50);
    CHECK(t.node(t.root()).entries[0].cf.radius() == 0.0);
}

TEST_CASE("CF: feature arithmetic")
{
    const Feature2 a = Feature2::of(Vec2(1, 2)), b = Feature2::of(Vec2(3, -1));
    const Feature2 s = a + b;
    CHECK(s.n == 2);
    CHECK(s.ls == Vec2(4, 1));
    CHECK(s.ss == 5.0 + 10.0);
    CHECK(s.centroid() == Vec2(2, 0.5));
    // Members sit sqrt(1 + 2.25) from the centroid.
    CHECK(s.radius() == doctest::Approx(std::sqrt(3.25)));
    CHECK(Feature2{}.radius() == 0.0);
}

TEST_CASE("CF tree: parent features equal child sums after every insert")
{
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const double T = rng.uniform(0.5, 8.0);
        CfTree t(T, 3 + trial % 4, 2 + trial % 5);
        for (int i = 0; i < 300; ++i) {
            t.insert(Vec2(rng.uniform(0, 100), rng.uniform(0, 100)), i);
            REQUIRE_NOTHROW(t.check_invariants(1e-6));
        }
        CHECK(t.size() == 300);
        CHECK(t.node_count() > 1);
    }
}

TEST_CASE("CF tree: leaf entries respect the threshold and partition the input")
{
    Rng rng(21);
    std::vector<Vec2> pts;
    std::vector<int> ids;
    for (int i = 0; i < 500; ++i) {
        pts.emplace_back(rng.uniform(-50, 50), rng.uniform(-50, 50));
        ids.push_back(i * 3 + 1);
    }
    const double T = 6.0;
    const auto clusters = birch_clusters(pts, ids, T, 8, 8);
    std::multiset<int> seen;
    for (const auto& c : clusters) {
        REQUIRE_FALSE(c.empty());
        Feature2 f;
        for (int id : c) {
            seen.insert(id);
            f += Feature2::of(pts[std::size_t((id - 1) / 3)]);
        }
        CHECK(f.radius() <= T + 1e-9);
    }
    CHECK(seen == std::multiset<int>(ids.begin(), ids.end()));
    CHECK(birch_clusters(pts, ids, T, 8, 8) == clusters);
}

TEST_CASE("CF tree: separated blobs come apart")
{
    // Brute-force reference: single-linkage components with a cut between
    // the blob spread and the blob gap.
    Rng rng(5);
    std::vector<Vec2> pts;
    std::vector<int> ids, truth;
    const Vec2 centers[] = {Vec2(0, 0), Vec2(40, 5), Vec2(-10, 60)};
    for (int i = 0; i < 90; ++i) {
        const int k = i % 3;
        pts.push_back(centers[k] + Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
        ids.push_back(i);
        truth.push_back(k);
    }
    std::vector<int> comp(pts.size(), -1);
    int ncomp = 0;
    for (std::size_t s = 0; s < pts.size(); ++s) {
        if (comp[s] >= 0)
            continue;
        std::vector<std::size_t> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < pts.size(); ++v)
                if (comp[v] < 0 && (pts[u] - pts[v]).norm() < 10.0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }
    REQUIRE(ncomp == 3);

    const auto clusters = birch_clusters(pts, ids, 5.0, 8, 8);
    REQUIRE(clusters.size() == 3);
    for (const auto& c : clusters)
        for (int id : c) {
            CHECK(comp[std::size_t(id)] == comp[std::size_t(c.front())]);
            CHECK(truth[std::size_t(id)] == truth[std::size_t(c.front())]);
        }
    CHECK(birch_clusters({}, {}, 5.0, 8, 8).empty());
}

TEST_CASE("minimal enclosing circle: small cases")
{
    auto c = minimal_enclosing_circle(std::vector<Vec2>{Vec2(0, 0), Vec2(2, 0)});
    CHECK(c.center.isApprox(Vec2(1, 0)));
    CHECK(c.radius == doctest::Approx(1.0));
    c = minimal_enclosing_circle(std::vector<Vec2>{Vec2(0, 0), Vec2(2, 0), Vec2(1, 1)});
    CHECK(c.center.isApprox(Vec2(1, 0)));
    CHECK(c.radius == doctest::Approx(1.0));
    CHECK(((Vec2(1, 1) - c.center).norm() - 1.0) <= 1e-12);
    c = minimal_enclosing_circle(std::vector<Vec2>{Vec2(4, 4)});
    CHECK(c.radius == 0.0);
    CHECK_THROWS(minimal_enclosing_circle(std::vector<Vec2>{}));
}

TEST_CASE("minimal enclosing circle: agrees with exhaustive search")
{
    Rng rng(1001);
    double worst = 0.0;
    for (int set = 0; set < 200; ++set) {
        const int n = 1 + int(rng.below(12));
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            // Some sets on a coarse grid to provoke collinear and cocircular cases.
            if (set % 4 == 0)
                pts.emplace_back(rng.between(0, 4), rng.between(0, 4));
            else
                pts.emplace_back(rng.uniform(-100, 100), rng.uniform(-100, 100));
        }
        const auto c = minimal_enclosing_circle(pts);
        for (const auto& p : pts)
            CHECK((p - c.center).norm() <= c.radius + 1e-9);
        worst = std::max(worst, std::abs(c.radius - oracle::brute_mec_radius(pts)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("zigzag sweep")
{
    SUBCASE("nobody unserved")
    {
        Scene s = square_scene(100);
        s.tbs[0].active = true;
        for (int i = 0; i < 5; ++i) {
            s.ues.push_back(unserved(i, 10.0 * i, 5));
            s.ues.back().serving = 0;
        }
        CHECK(zigzag_sweep(s, 25).discovered.empty());
    }
    SUBCASE("side S, interval S/4: five rows reach every point")
    {
        const Scene s = square_scene(100);
        const auto r = zigzag_sweep(s, 25);
        CHECK(r.rows == 5);
        CHECK(r.row_spacing <= 25.0);
        CHECK(r.waypoints.size() == 10);
        Rng rng(4);
        for (int i = 0; i < 1000; ++i) {
            const double y = rng.uniform(0, 100);
            double best = 1e9;
            for (const auto& w : r.waypoints)
                best = std::min(best, std::abs(w.y() - y));
            CHECK(best <= 12.5 + 1e-12);
        }
        // Boustrophedon: rows alternate direction.
        CHECK(r.waypoints[0].x() == 0.0);
        CHECK(r.waypoints[1].x() == 100.0);
        CHECK(r.waypoints[2].x() == 100.0);
        CHECK(r.waypoints[3].x() == 0.0);
    }
    SUBCASE("interval beyond the extent still sweeps")
    {
        const auto r = zigzag_sweep(square_scene(100), 1000);
        CHECK(r.rows >= 1);
        CHECK_THROWS_AS(zigzag_sweep(square_scene(100), 0.0), ConfigError);
    }
    SUBCASE("path order then id")
    {
        Scene s = square_scene(100);
        s.ues = {unserved(0, 50, 90), unserved(1, 10, 2), unserved(2, 90, 1), unserved(3, 5, 52)};
        const auto r = zigzag_sweep(s, 25);
        std::vector<int> order;
        for (const auto& u : r.discovered)
            order.push_back(u.id);
        CHECK(order == std::vector<int>{1, 2, 3, 0});
    }
}

TEST_CASE("sweep after the {0,1,1,0} disaster finds exactly the orphaned users")
{
    const RunConfig cfg;
    const Scene scene = apply_disaster(build_scene(cfg), cfg.scene.tbs_state);
    const auto r = zigzag_sweep(scene, scene.to_units(cfg.uav_range_m()));
    std::set<int> found, expected;
    for (const auto& u : r.discovered)
        found.insert(u.id);
    for (const auto& u : scene.ues)
        if (u.origin_tbs == 0 || u.origin_tbs == 3)
            expected.insert(u.id);
    CHECK(found == expected);
    CHECK(found.size() == r.discovered.size());
}

TEST_CASE("cluster_ues: circles fit the UAV range and members partition the input")
{
    for (std::uint64_t seed : {1ULL, 42ULL, 77ULL}) {
        RunConfig cfg;
        cfg.seed = seed;
        const Prepared prep = prepare(cfg);
        const double range = cfg.uav_range_units();
        std::multiset<int> members;
        for (const auto& c : prep.clusters) {
            CHECK(c.circle.radius <= range);
            std::vector<Vec2> pts;
            for (int id : c.members) {
                members.insert(id);
                const Vec2 p = prep.scene.ues[std::size_t(id)].position.head<2>();
                CHECK(c.circle.contains(p));
                pts.push_back(p);
            }
            CHECK(c.circle.radius == doctest::Approx(minimal_enclosing_circle(pts).radius));
        }
        const auto unserved_ids = prep.scene.unserved_ids();
        CHECK(members == std::multiset<int>(unserved_ids.begin(), unserved_ids.end()));
        CHECK(prep.assignments.size() == prep.clusters.size());
    }
}

TEST_CASE("cluster_ues: oversized clusters are split until their circles fit")
{
    std::vector<UserEquipment> ues;
    for (int i = 0; i < 40; ++i)
        ues.push_back(unserved(i, 3.0 * i, (i % 2) * 1.0));
    ClusteringOptions o;
    o.threshold = 100.0; // one CF entry would swallow the whole line
    o.max_circle_radius = 10.0;
    const auto clusters = cluster_ues(ues, o);
    CHECK(clusters.size() > 1);
    std::size_t total = 0;
    for (const auto& c : clusters) {
        CHECK(c.circle.radius <= 10.0);
        total += c.members.size();
    }
    CHECK(total == 40);
}

TEST_CASE("assign_uavs")
{
    Scene s = square_scene(200);
    std::vector<Cluster> clusters;
    for (int k = 0; k < 8; ++k) {
        Cluster c;
        for (int j = 0; j < 3; ++j) {
            const int id = int(s.ues.size());
            s.ues.push_back(unserved(id, 20.0 + 20.0 * k + j, 30.0 + 15.0 * j));
            c.members.push_back(id);
        }
        std::vector<Vec2> pts;
        for (int id : c.members)
            pts.push_back(s.ues[std::size_t(id)].position.head<2>());
        c.circle = minimal_enclosing_circle(pts);
        clusters.push_back(c);
    }
    const AltitudeBand band{1, 6};
    const auto a = assign_uavs(clusters, s, band, 9);
    REQUIRE(a.size() == 8);
    std::set<int> all;
    std::vector<Cell> starts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].uav_id == int(i));
        for (int id : a[i].members)
            CHECK(all.insert(id).second);
        CHECK(a[i].workspace.contains(a[i].initial));
        CHECK(a[i].workspace.lo.z() == 1);
        CHECK(a[i].workspace.hi.z() == 6);
        starts.push_back(a[i].initial);
    }
    CHECK(oracle::pairwise_distinct(starts));

    const auto again = assign_uavs(clusters, s, band, 9);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(again[i].initial == a[i].initial);

    SUBCASE("single user cluster")
    {
        Scene one = square_scene(50);
        one.ues = {unserved(0, 17.3, 22.8)};
        const Cluster c{{0}, minimal_enclosing_circle(std::vector<Vec2>{Vec2(17.3, 22.8)})};
        const auto b = assign_uavs({c}, one, band, 1);
        REQUIRE(b.size() == 1);
        const auto& w = b[0].workspace;
        CHECK(w.lo.x() <= 17.3);
        CHECK(w.hi.x() >= 17.3);
        CHECK(w.lo.y() <= 22.8);
        CHECK(w.hi.y() >= 22.8);
    }
}

TEST_CASE("undivided workspaces cover the failed station's square")
{
    const RunConfig cfg;
    const Prepared prep = prepare(cfg);
    const auto wide = arm_assignments(prep, cfg, Baseline::no_birch);
    REQUIRE(wide.size() == prep.assignments.size());
    for (std::size_t i = 0; i < wide.size(); ++i) {
        CHECK(wide[i].members == prep.assignments[i].members);
        CHECK(cell_count(wide[i].workspace) > cell_count(prep.assignments[i].workspace));
        // The two failed discs are far apart, so every cluster has a single origin.
        for (int id : wide[i].members) {
            const Vec3& p = prep.scene.ues[std::size_t(id)].position;
            CHECK(wide[i].workspace.contains(Cell(int(p.x()), int(p.y()), wide[i].workspace.lo.z())));
        }
    }
}
