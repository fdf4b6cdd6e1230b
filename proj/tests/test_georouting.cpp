#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "locfree/clustergraph.hpp"
#include "locfree/georouting.hpp"
#include "locfree/json_io.hpp"
#include "locfree/netgen.hpp"
#include "locfree/rng.hpp"
#include "support.hpp"

using namespace locfree;
using support::chain_instance;
using support::corridor_spec;
using support::exhaustive_route;
using support::grid_instance;
using support::make_instance;
using support::truth_placement;
using support::unit_edge_max_flow;

namespace {

/// Structural invariants every route result must satisfy regardless of
/// outcome: starts at src, walks existing comm edges, never repeats a
/// node, and reports hop_count = path length - 1.
void check_route_shape(const RouteResult& r, const CommGraph& graph, NodeId src) {
    REQUIRE_FALSE(r.path.empty());
    CHECK(r.path.front() == src);
    CHECK(r.hop_count == r.path.size() - 1);
    std::set<NodeId> seen;
    for (NodeId v : r.path) {
        CHECK(v < graph.node_count());
        CHECK(seen.insert(v).second);
    }
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) CHECK(graph.has_edge(r.path[i], r.path[i + 1]));
}

struct AttrsSpec {
    ClusterId a, b;
    double energy, bandwidth;
};

/// Hand-built cluster graph: vertices 0..n-1, explicit edge list.
ClusterGraph make_cg(ClusterId n, std::vector<AttrsSpec> edge_specs) {
    ClusterGraph cg;
    for (ClusterId c = 0; c < n; ++c) {
        cg.vertices.push_back(c);
        cg.kind[c] = ClusterKind::other;
        cg.node_count[c] = 1;
    }
    std::sort(edge_specs.begin(), edge_specs.end(), [](const AttrsSpec& x, const AttrsSpec& y) {
        return std::minmax(x.a, x.b) < std::minmax(y.a, y.b);
    });
    for (const AttrsSpec& e : edge_specs) {
        auto [lo, hi] = std::minmax(e.a, e.b);
        cg.edges.emplace_back(lo, hi);
        cg.edge_attrs[pair_key(lo, hi)] = {e.energy, e.bandwidth, 2};
    }
    return cg;
}

ClusterGraph random_cluster_graph(Rng& rng, ClusterId n, bool with_attrs) {
    ClusterGraph cg;
    for (ClusterId c = 0; c < n; ++c) {
        cg.vertices.push_back(c);
        cg.kind[c] = ClusterKind::other;
        cg.node_count[c] = 1;
    }
    // small value pools so distinct paths tie in weight on purpose
    const double energies[] = {0.25, 0.5, 1.0};
    const double bws[] = {1000.0, 2000.0, 3000.0};
    for (ClusterId a = 0; a < n; ++a) {
        for (ClusterId b = a + 1; b < n; ++b) {
            if (rng.below(100) >= 45) continue;
            cg.edges.emplace_back(a, b);
            if (with_attrs)
                cg.edge_attrs[pair_key(a, b)] = {energies[rng.below(3)], bws[rng.below(3)], 2};
        }
    }
    return cg;
}

}  // namespace

TEST_CASE("greedy forwarding crosses a convex grid and delivers") {
    const NetworkInstance inst = grid_instance(8, 8, 1.0, 1.5, {});
    const Placement p = truth_placement(inst);
    const NodeId src = 0, goal = 63;
    const RouteResult r =
        greedy_geo_route(p, inst.graph, src, inst.positions[goal], 0.5, &inst);
    check_route_shape(r, inst.graph, src);
    CHECK(r.outcome == RouteOutcome::delivered);
    CHECK(r.path.back() == goal);
    CHECK_FALSE(r.stuck_node.has_value());
    // the 1.5 radius admits diagonal steps, so the beeline takes 7 hops
    CHECK(r.hop_count == 7);
    REQUIRE(r.true_target_distance.has_value());
    CHECK(*r.true_target_distance == doctest::Approx(0.0));
    CHECK_FALSE(r.mislocated);
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
        const double before = inst.positions[r.path[i]].distance(inst.positions[goal]);
        const double after = inst.positions[r.path[i + 1]].distance(inst.positions[goal]);
        CHECK(after < before);
    }

    SUBCASE("a source already within the delivery radius never moves") {
        const RouteResult stay = greedy_geo_route(p, inst.graph, 0, {0.3, 0.0}, 0.5);
        CHECK(stay.outcome == RouteOutcome::delivered);
        CHECK(stay.path == std::vector<NodeId>{0});
        CHECK(stay.hop_count == 0);
    }
}

TEST_CASE("greedy forwarding stalls in a concave pocket") {
    // a C shape: the packet at the far tip has no neighbor closer to the
    // mouth of the C, so the very first step already fails
    std::vector<Point2D> pts;
    for (int i = 0; i <= 10; ++i) pts.push_back({double(i), 0.0});        // 0..10
    for (int i = 1; i <= 10; ++i) pts.push_back({10.0, double(i)});       // 11..20
    for (int i = 1; i <= 10; ++i) pts.push_back({10.0 - i, 10.0});        // 21..30
    const NetworkInstance inst = make_instance(std::move(pts), {}, 1.1);
    const Placement p = truth_placement(inst);
    const NodeId tip = 30;  // at (0, 10), target straight below
    const RouteResult r = greedy_geo_route(p, inst.graph, tip, {0.0, 0.0}, 1.0, &inst);
    CHECK(r.outcome == RouteOutcome::local_minimum);
    CHECK(r.path == std::vector<NodeId>{tip});
    CHECK(r.hop_count == 0);
    REQUIRE(r.stuck_node.has_value());
    CHECK(*r.stuck_node == tip);
    REQUIRE(r.true_target_distance.has_value());
    CHECK(*r.true_target_distance == doctest::Approx(10.0));
    CHECK_FALSE(r.mislocated);
}

TEST_CASE("greedy forwarding without usable coordinates reports no_route") {
    const NetworkInstance inst = chain_instance(5, 1.0, 1.1, {});
    Placement p = truth_placement(inst);

    SUBCASE("unpositioned source") {
        p.coords[2].reset();
        const RouteResult r = greedy_geo_route(p, inst.graph, 2, {4.0, 0.0}, 0.5);
        CHECK(r.outcome == RouteOutcome::no_route);
        CHECK(r.path == std::vector<NodeId>{2});
        REQUIRE(r.stuck_node.has_value());
        CHECK(*r.stuck_node == 2);
    }
    SUBCASE("positioned source whose neighbors are all unpositioned") {
        p.coords[1].reset();
        const RouteResult r = greedy_geo_route(p, inst.graph, 0, {4.0, 0.0}, 0.5);
        CHECK(r.outcome == RouteOutcome::no_route);
        REQUIRE(r.stuck_node.has_value());
        CHECK(*r.stuck_node == 0);
    }
    SUBCASE("source out of range throws") {
        CHECK_THROWS_AS(greedy_geo_route(p, inst.graph, 99, {0, 0}, 0.5), std::invalid_argument);
    }
}

TEST_CASE("delivery onto a mislocated holder is flagged by the audit") {
    // two parallel chains 100 apart; the far chain is placed on top of the
    // near one, so its nodes happily accept packets for the near chain
    std::vector<Point2D> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({double(i), 0.0});    // 0..9 genuine
    for (int i = 0; i < 10; ++i) pts.push_back({double(i), 100.0});  // 10..19 folded
    const NetworkInstance inst = make_instance(std::move(pts), {}, 1.1);
    Placement p;
    p.frame = Frame::global;
    p.coords.resize(20);
    for (NodeId v = 0; v < 20; ++v) p.coords[v] = Point2D{double(v % 10), 0.0};

    const Point2D target{3.0, 0.0};
    const RouteResult folded = greedy_geo_route(p, inst.graph, 15, target, 0.5, &inst);
    CHECK(folded.outcome == RouteOutcome::delivered);
    CHECK(folded.path == std::vector<NodeId>{15, 14, 13});
    REQUIRE(folded.true_target_distance.has_value());
    CHECK(*folded.true_target_distance == doctest::Approx(100.0));
    CHECK(folded.mislocated);  // 100 > 2.0 * 0.5

    const RouteResult genuine = greedy_geo_route(p, inst.graph, 5, target, 0.5, &inst);
    CHECK(genuine.outcome == RouteOutcome::delivered);
    CHECK(genuine.path == std::vector<NodeId>{5, 4, 3});
    CHECK(*genuine.true_target_distance == doctest::Approx(0.0));
    CHECK_FALSE(genuine.mislocated);

    SUBCASE("a generous audit factor tolerates the same distance") {
        const RouteResult lax = greedy_geo_route(p, inst.graph, 15, target, 0.5, &inst, 400.0);
        CHECK(lax.outcome == RouteOutcome::delivered);
        CHECK_FALSE(lax.mislocated);
    }
}

TEST_CASE("greedy forwarding terminates with a well-formed result on gappy placements") {
    const NetworkInstance inst = generate_network(corridor_spec(60, 10, 0.5, 3, 13));
    Placement p = truth_placement(inst);
    for (NodeId v = 0; v < p.coords.size(); v += 7) p.coords[v].reset();  // punch holes

    Rng rng(mix_seed(0xf022u, 1));
    int delivered = 0, stalled = 0, unrouted = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const NodeId src = static_cast<NodeId>(rng.below(inst.node_count()));
        const NodeId dst = static_cast<NodeId>(rng.below(inst.node_count()));
        const RouteResult r =
            greedy_geo_route(p, inst.graph, src, inst.positions[dst], inst.comm_radius, &inst);
        check_route_shape(r, inst.graph, src);
        CHECK(r.path.size() <= inst.node_count());
        switch (r.outcome) {
            case RouteOutcome::delivered:
                CHECK_FALSE(r.stuck_node.has_value());
                REQUIRE(p.coords[r.path.back()].has_value());
                CHECK(p.coords[r.path.back()]->distance(inst.positions[dst]) <= inst.comm_radius);
                ++delivered;
                break;
            case RouteOutcome::local_minimum:
                REQUIRE(r.stuck_node.has_value());
                CHECK(*r.stuck_node == r.path.back());
                ++stalled;
                break;
            case RouteOutcome::no_route:
                CHECK(src % 7 == 0);  // only unpositioned sources lack a direction here
                ++unrouted;
                break;
        }
        // the audit runs whenever the packet actually started moving; an
        // unpositioned source exits before any holder exists to audit
        if (p.coords[src].has_value()) REQUIRE(r.true_target_distance.has_value());
    }
    CHECK(delivered + stalled + unrouted == 60);
    CHECK(delivered > 0);
}

TEST_CASE("cluster routes on hand-built graphs") {
    SUBCASE("adjacent clusters") {
        const ClusterGraph cg = make_cg(2, {{0, 1, 1.0, 1000}});
        const ClusterRoute r = cluster_route(cg, 0, 1, RouteWeight::hops);
        REQUIRE(r.found);
        CHECK(r.cluster_path == std::vector<ClusterId>{0, 1});
        CHECK(r.total_weight == 1.0);
        CHECK(cluster_route(cg, 0, 1, RouteWeight::energy).total_weight == doctest::Approx(1.0));
        CHECK(cluster_route(cg, 0, 1, RouteWeight::bandwidth_bottleneck).total_weight ==
              doctest::Approx(1000.0));
    }
    SUBCASE("opposite arms of a star meet at the hub") {
        const ClusterGraph cg =
            make_cg(5, {{0, 1, 1, 1000}, {0, 2, 1, 1000}, {0, 3, 1, 1000}, {0, 4, 1, 1000}});
        const ClusterRoute r = cluster_route(cg, 1, 3, RouteWeight::hops);
        REQUIRE(r.found);
        CHECK(r.cluster_path == std::vector<ClusterId>{1, 0, 3});
        CHECK(r.total_weight == 2.0);
    }
    SUBCASE("bottleneck routing takes the wide detour, hop routing the short cut") {
        const ClusterGraph cg = make_cg(
            4, {{0, 3, 1, 1000}, {0, 1, 1, 5000}, {1, 2, 1, 5000}, {2, 3, 1, 5000}});
        const ClusterRoute wide = cluster_route(cg, 0, 3, RouteWeight::bandwidth_bottleneck);
        REQUIRE(wide.found);
        CHECK(wide.cluster_path == std::vector<ClusterId>{0, 1, 2, 3});
        CHECK(wide.total_weight == doctest::Approx(5000.0));
        const ClusterRoute s = cluster_route(cg, 0, 3, RouteWeight::hops);
        CHECK(s.cluster_path == std::vector<ClusterId>{0, 3});
        CHECK(s.total_weight == 1.0);
    }
    SUBCASE("energy routing prefers two healthy borders over one drained one") {
        const ClusterGraph cg = make_cg(4, {{0, 3, 0.2, 1000}, {0, 1, 1.0, 1000}, {1, 3, 1.0, 1000}});
        const ClusterRoute r = cluster_route(cg, 0, 3, RouteWeight::energy);
        REQUIRE(r.found);
        CHECK(r.cluster_path == std::vector<ClusterId>{0, 1, 3});
        CHECK(r.total_weight == doctest::Approx(2.0));
    }
    SUBCASE("a fully drained border is unusable") {
        const ClusterGraph cg = make_cg(2, {{0, 1, 0.0, 1000}});
        CHECK_FALSE(cluster_route(cg, 0, 1, RouteWeight::energy).found);
        CHECK(cluster_route(cg, 0, 1, RouteWeight::hops).found);
    }
    SUBCASE("equal-weight alternatives resolve to the smaller cluster sequence") {
        const ClusterGraph cg =
            make_cg(4, {{0, 1, 1, 1000}, {0, 2, 1, 1000}, {1, 3, 1, 1000}, {2, 3, 1, 1000}});
        for (RouteWeight w :
             {RouteWeight::hops, RouteWeight::energy, RouteWeight::bandwidth_bottleneck}) {
            const ClusterRoute r = cluster_route(cg, 0, 3, w);
            REQUIRE(r.found);
            CHECK(r.cluster_path == std::vector<ClusterId>{0, 1, 3});
        }
    }
    SUBCASE("src == dst answers with the trivial path") {
        const ClusterGraph cg = make_cg(3, {{0, 1, 1, 1000}});
        for (RouteWeight w :
             {RouteWeight::hops, RouteWeight::energy, RouteWeight::bandwidth_bottleneck}) {
            const ClusterRoute r = cluster_route(cg, 2, 2, w);
            REQUIRE(r.found);
            CHECK(r.cluster_path == std::vector<ClusterId>{2});
            CHECK(r.total_weight == 0.0);
        }
    }
    SUBCASE("disconnected clusters are not found") {
        const ClusterGraph cg = make_cg(3, {{0, 1, 1, 1000}});
        const ClusterRoute r = cluster_route(cg, 0, 2, RouteWeight::hops);
        CHECK_FALSE(r.found);
        CHECK(r.cluster_path.empty());
    }
    SUBCASE("unknown vertices throw") {
        const ClusterGraph cg = make_cg(2, {{0, 1, 1, 1000}});
        CHECK_THROWS_AS(cluster_route(cg, 9, 1, RouteWeight::hops), std::invalid_argument);
        CHECK_THROWS_AS(cluster_route(cg, 0, 9, RouteWeight::hops), std::invalid_argument);
    }
}

TEST_CASE("cluster routing matches exhaustive search on random graphs") {
    const RouteWeight weights[] = {RouteWeight::hops, RouteWeight::energy,
                                   RouteWeight::bandwidth_bottleneck};
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        Rng rng(mix_seed(0x9e0u, trial));
        const ClusterId n = 3 + static_cast<ClusterId>(rng.below(6));
        const bool with_attrs = trial != 7;  // one bare graph: default attrs on every edge
        const ClusterGraph cg = random_cluster_graph(rng, n, with_attrs);
        CAPTURE(trial);
        for (ClusterId s = 0; s < n; ++s) {
            for (ClusterId d = 0; d < n; ++d) {
                for (RouteWeight w : weights) {
                    const ClusterRoute got = cluster_route(cg, s, d, w);
                    const support::OracleRoute want = exhaustive_route(cg, s, d, w);
                    CAPTURE(s);
                    CAPTURE(d);
                    CAPTURE(static_cast<int>(w));
                    REQUIRE(got.found == want.found);
                    if (!want.found) continue;
                    CHECK(got.total_weight == doctest::Approx(want.weight).epsilon(1e-12));
                    if (w == RouteWeight::bandwidth_bottleneck) {
                        // the weight is exactly optimal, but among several
                        // equally wide paths the search may settle a hub via
                        // a wider prefix and so return a different member of
                        // the optimum set; verify the path on its own merits
                        REQUIRE_FALSE(got.cluster_path.empty());
                        CHECK(got.cluster_path.front() == s);
                        CHECK(got.cluster_path.back() == d);
                        std::set<ClusterId> uniq(got.cluster_path.begin(),
                                                 got.cluster_path.end());
                        CHECK(uniq.size() == got.cluster_path.size());
                        double bottleneck = std::numeric_limits<double>::infinity();
                        for (std::size_t i = 0; i + 1 < got.cluster_path.size(); ++i) {
                            const ClusterId a = got.cluster_path[i], b = got.cluster_path[i + 1];
                            CHECK(cg.has_edge(a, b));
                            const ClusterEdgeAttrs* attrs = cg.attrs(a, b);
                            bottleneck = std::min(bottleneck, attrs ? attrs->bandwidth : 0.0);
                        }
                        if (s != d)
                            CHECK(bottleneck == doctest::Approx(want.weight).epsilon(1e-12));
                    } else {
                        // additive metrics keep the global lexicographic
                        // tie-break, so the full sequence is pinned
                        CHECK(got.cluster_path == want.path);
                    }
                }
            }
        }
    }
}

TEST_CASE("expanding a cluster path walks real communication edges") {
    SUBCASE("single-cluster path reduces to plain shortest search inside it") {
        const NetworkInstance inst = chain_instance(9, 1.0, 1.1, {});
        Clustering cl;
        cl.assignment.assign(9, 0);
        cl.kinds = {ClusterKind::other};
        const RouteResult r = expand_cluster_path({0}, cl, inst.graph, 1, 7);
        check_route_shape(r, inst.graph, 1);
        CHECK(r.outcome == RouteOutcome::delivered);
        CHECK(r.path == std::vector<NodeId>{1, 2, 3, 4, 5, 6, 7});
        CHECK(r.hop_count == 6);
        CHECK_FALSE(r.failed_leg.has_value());
    }
    SUBCASE("src == dst stays put") {
        const NetworkInstance inst = chain_instance(3, 1.0, 1.1, {});
        Clustering cl;
        cl.assignment.assign(3, 0);
        cl.kinds = {ClusterKind::other};
        const RouteResult r = expand_cluster_path({0}, cl, inst.graph, 2, 2);
        CHECK(r.outcome == RouteOutcome::delivered);
        CHECK(r.path == std::vector<NodeId>{2});
        CHECK(r.hop_count == 0);
    }
    SUBCASE("each leg enters the next cluster at its closest, lowest-id node") {
        // node 0 alone in cluster 0; cluster 1 = {1, 2, 3}; both 1 and 2
        // border node 0 at depth 1, so the leg must enter at node 1, and
        // only node 1 reaches node 3 inside the cluster
        const NetworkInstance inst =
            make_instance({{0, 0}, {0, 1}, {1, 0}, {0, 2}}, {}, 1.1);
        Clustering cl;
        cl.assignment = {0, 1, 1, 1};
        cl.kinds = {ClusterKind::other, ClusterKind::other};
        const RouteResult r = expand_cluster_path({0, 1}, cl, inst.graph, 0, 3);
        check_route_shape(r, inst.graph, 0);
        CHECK(r.outcome == RouteOutcome::delivered);
        CHECK(r.path == std::vector<NodeId>{0, 1, 3});
    }
    SUBCASE("a leg with no physical border fails with its index") {
        // clusters adjacent in the cluster graph we claim, but the comm
        // graph has no edge between them
        const NetworkInstance inst =
            make_instance({{0, 0}, {1, 0}, {10, 0}, {11, 0}}, {}, 1.5);
        Clustering cl;
        cl.assignment = {0, 0, 1, 1};
        cl.kinds = {ClusterKind::other, ClusterKind::other};
        const RouteResult r = expand_cluster_path({0, 1}, cl, inst.graph, 0, 3);
        CHECK(r.outcome == RouteOutcome::no_route);
        REQUIRE(r.failed_leg.has_value());
        CHECK(*r.failed_leg == 0);
        REQUIRE(r.stuck_node.has_value());
        CHECK(*r.stuck_node == 0);
        CHECK(r.path == std::vector<NodeId>{0});
    }
    SUBCASE("a later leg failure reports the later index and the border node reached") {
        const NetworkInstance inst = make_instance(
            {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {10, 0}, {11, 0}}, {}, 1.2);
        Clustering cl;
        cl.assignment = {0, 0, 1, 1, 2, 2};
        cl.kinds = {ClusterKind::other, ClusterKind::other, ClusterKind::other};
        const RouteResult r = expand_cluster_path({0, 1, 2}, cl, inst.graph, 0, 5);
        CHECK(r.outcome == RouteOutcome::no_route);
        REQUIRE(r.failed_leg.has_value());
        CHECK(*r.failed_leg == 1);
        REQUIRE(r.stuck_node.has_value());
        CHECK(*r.stuck_node == 2);
        CHECK(r.path == std::vector<NodeId>{0, 1, 2});
        CHECK(r.hop_count == 2);
    }
    SUBCASE("malformed requests throw") {
        const NetworkInstance inst = chain_instance(4, 1.0, 1.1, {});
        Clustering cl;
        cl.assignment = {0, 0, 1, 1};
        cl.kinds = {ClusterKind::other, ClusterKind::other};
        CHECK_THROWS_AS(expand_cluster_path({}, cl, inst.graph, 0, 3), std::invalid_argument);
        CHECK_THROWS_AS(expand_cluster_path({1, 0}, cl, inst.graph, 0, 3),
                        std::invalid_argument);  // src not in first cluster
        CHECK_THROWS_AS(expand_cluster_path({0, 1}, cl, inst.graph, 0, 1),
                        std::invalid_argument);  // dst not in last cluster
        CHECK_THROWS_AS(expand_cluster_path({0}, cl, inst.graph, 0, 99), std::invalid_argument);
        Clustering wrong;
        wrong.assignment = {0, 0};
        wrong.kinds = {ClusterKind::other};
        CHECK_THROWS_AS(expand_cluster_path({0}, wrong, inst.graph, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("edge-disjoint cluster paths") {
    SUBCASE("a four-cycle carries exactly two disjoint routes between opposite corners") {
        const ClusterGraph cg =
            make_cg(4, {{0, 1, 1, 1000}, {1, 2, 1, 1000}, {2, 3, 1, 1000}, {0, 3, 1, 1000}});
        const auto routes = disjoint_cluster_paths(cg, 0, 2, 3);
        REQUIRE(routes.size() == 2);
        CHECK(routes[0].cluster_path == std::vector<ClusterId>{0, 1, 2});
        CHECK(routes[1].cluster_path == std::vector<ClusterId>{0, 3, 2});
        std::set<std::pair<ClusterId, ClusterId>> used;
        for (const ClusterRoute& r : routes)
            for (std::size_t i = 0; i + 1 < r.cluster_path.size(); ++i) {
                auto [lo, hi] = std::minmax(r.cluster_path[i], r.cluster_path[i + 1]);
                CHECK(used.insert({lo, hi}).second);
            }
    }
    SUBCASE("a star hub is a single point of failure") {
        const ClusterGraph cg = make_cg(3, {{0, 1, 1, 1000}, {0, 2, 1, 1000}});
        const auto routes = disjoint_cluster_paths(cg, 1, 2, 4);
        REQUIRE(routes.size() == 1);
        CHECK(routes[0].cluster_path == std::vector<ClusterId>{1, 0, 2});
    }
    SUBCASE("k <= 0 asks for nothing") {
        const ClusterGraph cg = make_cg(2, {{0, 1, 1, 1000}});
        CHECK(disjoint_cluster_paths(cg, 0, 1, 0).empty());
        CHECK(disjoint_cluster_paths(cg, 0, 1, -2).empty());
    }
    SUBCASE("src == dst yields one trivial route") {
        const ClusterGraph cg = make_cg(2, {{0, 1, 1, 1000}});
        const auto routes = disjoint_cluster_paths(cg, 1, 1, 5);
        REQUIRE(routes.size() == 1);
        CHECK(routes[0].cluster_path == std::vector<ClusterId>{1});
    }
    SUBCASE("the count never exceeds the unit-capacity max flow") {
        for (std::uint64_t trial = 0; trial < 12; ++trial) {
            Rng rng(mix_seed(0xd15u, trial));
            const ClusterId n = 4 + static_cast<ClusterId>(rng.below(5));
            const ClusterGraph cg = random_cluster_graph(rng, n, true);
            const ClusterId s = static_cast<ClusterId>(rng.below(n));
            ClusterId d = static_cast<ClusterId>(rng.below(n));
            while (d == s) d = static_cast<ClusterId>(rng.below(n));
            const auto routes = disjoint_cluster_paths(cg, s, d, int(n));
            CAPTURE(trial);
            CHECK(int(routes.size()) <= unit_edge_max_flow(cg, s, d));
            std::set<std::pair<ClusterId, ClusterId>> used;
            for (const ClusterRoute& r : routes) {
                CHECK(r.found);
                REQUIRE_FALSE(r.cluster_path.empty());
                CHECK(r.cluster_path.front() == s);
                CHECK(r.cluster_path.back() == d);
                for (std::size_t i = 0; i + 1 < r.cluster_path.size(); ++i) {
                    const ClusterId a = r.cluster_path[i], b = r.cluster_path[i + 1];
                    CHECK(cg.has_edge(a, b));
                    auto [lo, hi] = std::minmax(a, b);
                    CHECK(used.insert({lo, hi}).second);
                }
            }
        }
    }
}

TEST_CASE("outcome names") {
    CHECK(std::string(route_outcome_string(RouteOutcome::delivered)) == "delivered");
    CHECK(std::string(route_outcome_string(RouteOutcome::local_minimum)) == "local_minimum");
    CHECK(std::string(route_outcome_string(RouteOutcome::no_route)) == "no_route");
}

TEST_CASE("cluster-level routes expand to near-shortest walks on a street deployment") {
    const DeploymentSpec spec =
        deployment_from_json(load_json_file(std::string(LOCFREE_DATA_DIR) + "/paper_streets.json"));
    const NetworkInstance inst = generate_network(spec);
    const Clustering cl = build_clusters(inst.graph, detect_boundary(inst.graph));
    const ClusterGraph cg =
        build_cluster_graph(cl, inst.graph, ClusterGraphVariant::cluster_per_vertex);

    Rng rng(mix_seed(spec.seed, 0x726f7574u));
    const std::size_t n = inst.node_count();
    int attempts = 0, delivered = 0, within = 0;
    for (int i = 0; i < 200; ++i) {
        const NodeId src = static_cast<NodeId>(rng.below(n));
        NodeId dst = static_cast<NodeId>(rng.below(n));
        while (dst == src) dst = static_cast<NodeId>(rng.below(n));
        const ClusterRoute route =
            cluster_route(cg, cl.assignment[src], cl.assignment[dst], RouteWeight::hops);
        REQUIRE(route.found);  // the street network is connected
        const RouteResult r = expand_cluster_path(route.cluster_path, cl, inst.graph, src, dst);
        ++attempts;
        check_route_shape(r, inst.graph, src);
        REQUIRE(r.outcome == RouteOutcome::delivered);
        CHECK(r.path.back() == dst);
        ++delivered;
        const std::uint32_t direct = support::bfs_shortest_hops(inst.graph, src, dst);
        REQUIRE(direct > 0);
        if (double(r.hop_count) <= 3.0 * double(direct)) ++within;
        CHECK(double(r.hop_count) <= 8.0 * double(direct));  // never pathological
    }
    CHECK(attempts == 200);
    CHECK(delivered == 200);
    CHECK(within >= 180);  // the cluster detour stays within 3x for at least 90%
}
