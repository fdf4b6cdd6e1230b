#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "locfree/json_io.hpp"
#include "locfree/netgen.hpp"
#include "locfree/rng.hpp"
#include "support.hpp"

using namespace locfree;
using support::brute_force_unit_disk;
using support::corridor_spec;
using support::street;

namespace {

std::vector<std::pair<NodeId, NodeId>> edge_list(const CommGraph& g) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId v = 0; v < g.node_count(); ++v)
        for (NodeId u : g.neighbors(v))
            if (v < u) edges.emplace_back(v, u);
    return edges;
}

}  // namespace

TEST_CASE("unit disk graph uses the closed disk") {
    std::vector<Point2D> pts{{0, 0}, {0, 0.9}};
    CHECK(build_unit_disk_graph(pts, 1.0).edge_count() == 1);
    pts[1] = {0, 1.0};
    CHECK(build_unit_disk_graph(pts, 1.0).edge_count() == 1);
    pts[1] = {0, 1.0 + 1e-9};
    CHECK(build_unit_disk_graph(pts, 1.0).edge_count() == 0);
}

TEST_CASE("unit disk graph matches the quadratic oracle on random points") {
    Rng rng(0xd15cu);
    std::vector<Point2D> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
    const CommGraph g = build_unit_disk_graph(pts, 1.3);
    CHECK(edge_list(g) == brute_force_unit_disk(pts, 1.3));
    // symmetry and irreflexivity
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (NodeId u : g.neighbors(v)) {
            CHECK(u != v);
            CHECK(g.has_edge(u, v));
        }
    }
}

TEST_CASE("generated corridor instance matches the oracle graph and stays in bounds") {
    DeploymentSpec spec = corridor_spec(60, 10, 0.3, 3.0, 7);
    const NetworkInstance inst = generate_network(spec);
    REQUIRE(inst.node_count() > 0);
    CHECK(inst.node_count() <= 500);
    CHECK(edge_list(inst.graph) == brute_force_unit_disk(inst.positions, spec.comm_radius));
    for (const Point2D& p : inst.positions) {
        CHECK(p.x >= 0);
        CHECK(p.x <= 60);
        CHECK(std::abs(p.y) <= 5);
    }
    CHECK(inst.mean_degree() ==
          doctest::Approx(2.0 * inst.graph.edge_count() / double(inst.node_count())));
}

TEST_CASE("generation is a pure function of the spec") {
    DeploymentSpec spec = corridor_spec(40, 8, 0.4, 2.5, 11);
    spec.anchor_regions.push_back({{0, -4, 10, 4}, 5});
    const NetworkInstance a = generate_network(spec);
    const NetworkInstance b = generate_network(spec);
    CHECK(a.positions.size() == b.positions.size());
    for (std::size_t i = 0; i < a.positions.size(); ++i) CHECK(a.positions[i] == b.positions[i]);
    CHECK(a.anchors == b.anchors);
    CHECK(a.graph == b.graph);
    CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());

    DeploymentSpec other = spec;
    other.seed = 12;
    const NetworkInstance c = generate_network(other);
    const bool same = a.positions.size() == c.positions.size() &&
                      std::equal(a.positions.begin(), a.positions.end(), c.positions.begin());
    CHECK_FALSE(same);
}

TEST_CASE("anchor selection honours regions") {
    DeploymentSpec spec = corridor_spec(50, 10, 0.5, 3.0, 3);
    const Rect left{0, -5, 10, 5};
    const Rect right{40, -5, 50, 5};
    spec.anchor_regions.push_back({left, 4});
    spec.anchor_regions.push_back({right, 6});
    const NetworkInstance inst = generate_network(spec);
    REQUIRE(inst.anchors.size() == 10);
    CHECK(std::is_sorted(inst.anchors.begin(), inst.anchors.end()));
    std::size_t in_left = 0, in_right = 0;
    for (NodeId a : inst.anchors) {
        CHECK(inst.is_anchor(a));
        if (left.contains(inst.positions[a])) ++in_left;
        if (right.contains(inst.positions[a])) ++in_right;
    }
    CHECK(in_left == 4);
    CHECK(in_right == 6);
    std::size_t flagged = 0;
    for (NodeId v = 0; v < inst.node_count(); ++v)
        if (inst.is_anchor(v)) ++flagged;
    CHECK(flagged == inst.anchors.size());
}

TEST_CASE("invalid specs are rejected") {
    DeploymentSpec empty;
    empty.comm_radius = 1.0;
    CHECK_THROWS_AS(generate_network(empty), std::invalid_argument);

    DeploymentSpec barren = corridor_spec(10, 2, 0.0, 1.0, 1);
    CHECK_THROWS_AS(generate_network(barren), std::invalid_argument);

    DeploymentSpec bad_radius = corridor_spec(10, 2, 1.0, 0.0, 1);
    CHECK_THROWS_AS(generate_network(bad_radius), std::invalid_argument);

    DeploymentSpec greedy = corridor_spec(10, 2, 1.0, 1.0, 1);
    greedy.anchor_regions.push_back({{100, 100, 101, 101}, 1});  // empty region
    CHECK_THROWS_AS(generate_network(greedy), std::invalid_argument);

    DeploymentSpec degenerate;
    degenerate.comm_radius = 1.0;
    degenerate.segments.push_back(street({{0, 0}, {0, 0}}, 1.0, 1.0));
    CHECK_THROWS_AS(generate_network(degenerate), std::invalid_argument);
}

TEST_CASE("noise-free measurement reproduces exact distances") {
    DeploymentSpec spec = corridor_spec(30, 6, 0.5, 2.0, 5);
    const NetworkInstance inst = generate_network(spec);
    const RangingTable rt = measure_distances(inst, 0.0, 99);
    CHECK(rt.noise_stddev_fraction() == 0.0);
    CHECK(rt.size() == inst.graph.edge_count());
    for (NodeId v = 0; v < inst.node_count(); ++v) {
        for (NodeId u : inst.graph.neighbors(v)) {
            const auto m = rt.measured(v, u);
            REQUIRE(m.has_value());
            CHECK(*m == doctest::Approx(inst.positions[v].distance(inst.positions[u])));
            CHECK(rt.measured(u, v) == m);  // symmetric
        }
    }
    // no entry for a non-edge
    NodeId far_a = 0, far_b = 0;
    for (NodeId v = 0; v < inst.node_count() && far_b == 0; ++v)
        for (NodeId u = v + 1; u < inst.node_count(); ++u)
            if (!inst.graph.has_edge(v, u)) {
                far_a = v;
                far_b = u;
                break;
            }
    REQUIRE(far_a != far_b);
    CHECK_FALSE(rt.measured(far_a, far_b).has_value());
}

TEST_CASE("measurement noise is calibrated, unbiased and seed-stable") {
    const NetworkInstance inst = support::grid_instance(100, 100, 1.0, 1.5, {});
    REQUIRE(inst.graph.edge_count() > 30000);
    const RangingTable rt = measure_distances(inst, 0.01, 42);
    const RangingTable rt2 = measure_distances(inst, 0.01, 42);
    const RangingTable other = measure_distances(inst, 0.01, 43);

    double sum = 0, sum_sq = 0;
    std::size_t count = 0, differs = 0;
    for (NodeId v = 0; v < inst.node_count(); ++v) {
        for (NodeId u : inst.graph.neighbors(v)) {
            if (u <= v) continue;
            const double truth = inst.positions[v].distance(inst.positions[u]);
            const double rel = *rt.measured(v, u) / truth - 1.0;
            sum += rel;
            sum_sq += rel * rel;
            ++count;
            CHECK(*rt2.measured(v, u) == *rt.measured(v, u));
            if (*other.measured(v, u) != *rt.measured(v, u)) ++differs;
        }
    }
    const double mean = sum / double(count);
    const double stddev = std::sqrt(sum_sq / double(count) - mean * mean);
    CHECK(std::abs(mean) < 5e-4);
    CHECK(stddev > 0.008);
    CHECK(stddev < 0.012);
    CHECK(differs > count / 2);  // a new seed redraws the noise
}

TEST_CASE("heavy noise never produces a negative or zero measurement") {
    const NetworkInstance inst = support::grid_instance(60, 60, 1.0, 1.5, {});
    const RangingTable rt = measure_distances(inst, 0.30, 17);
    std::size_t floored = 0;
    for (NodeId v = 0; v < inst.node_count(); ++v) {
        for (NodeId u : inst.graph.neighbors(v)) {
            if (u <= v) continue;
            const double truth = inst.positions[v].distance(inst.positions[u]);
            const double factor = *rt.measured(v, u) / truth;
            CHECK(factor >= 0.01 - 1e-12);
            if (factor <= 0.01 + 1e-12) ++floored;
        }
    }
    CHECK(floored > 0);  // the clamp engages under heavy noise
    CHECK_THROWS_AS(measure_distances(inst, -0.1, 1), std::invalid_argument);
}
