#pragma once

// Shared instance builders and independent brute-force oracles for the
// test suites. Oracles deliberately use the dumbest correct algorithm so
// they cannot share a bug with the library code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>
#include <vector>

#include "locfree/clustergraph.hpp"
#include "locfree/georouting.hpp"
#include "locfree/localization.hpp"
#include "locfree/netgen.hpp"
#include "locfree/types.hpp"

namespace support {

using namespace locfree;

inline NetworkInstance make_instance(std::vector<Point2D> positions, std::vector<NodeId> anchors,
                                     double comm_radius) {
    NetworkInstance inst;
    inst.positions = std::move(positions);
    inst.anchors = std::move(anchors);
    std::sort(inst.anchors.begin(), inst.anchors.end());
    inst.comm_radius = comm_radius;
    inst.graph = build_unit_disk_graph(inst.positions, comm_radius);
    return inst;
}

/// n nodes on the x axis, `spacing` apart.
inline NetworkInstance chain_instance(std::size_t n, double spacing, double comm_radius,
                                      std::vector<NodeId> anchors) {
    std::vector<Point2D> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i) * spacing, 0.0});
    return make_instance(std::move(pts), std::move(anchors), comm_radius);
}

/// rows x cols lattice, row-major node ids.
inline NetworkInstance grid_instance(std::size_t rows, std::size_t cols, double spacing,
                                     double comm_radius, std::vector<NodeId> anchors) {
    std::vector<Point2D> pts;
    pts.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            pts.push_back({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
    return make_instance(std::move(pts), std::move(anchors), comm_radius);
}

/// Noise-free measurements for every edge of the instance.
inline RangingTable exact_ranging(const NetworkInstance& inst) {
    std::unordered_map<std::uint64_t, double> m;
    for (NodeId v = 0; v < inst.graph.node_count(); ++v)
        for (NodeId u : inst.graph.neighbors(v))
            if (v < u) m[pair_key(v, u)] = inst.positions[v].distance(inst.positions[u]);
    return RangingTable(std::move(m), 0.0);
}

inline Placement truth_placement(const NetworkInstance& inst) {
    Placement p;
    p.frame = Frame::global;
    p.coords.assign(inst.positions.begin(), inst.positions.end());
    return p;
}

// ---- deployment builders ----

inline StreetSegment street(std::vector<Point2D> polyline, double width, double density) {
    StreetSegment s;
    s.polyline = std::move(polyline);
    s.width = width;
    s.node_density = density;
    return s;
}

/// One straight horizontal street.
inline DeploymentSpec corridor_spec(double length, double width, double density,
                                    double comm_radius, std::uint64_t seed) {
    DeploymentSpec spec;
    spec.segments.push_back(street({{0, 0}, {length, 0}}, width, density));
    spec.comm_radius = comm_radius;
    spec.seed = seed;
    return spec;
}

/// Two equal streets crossing at the origin (a plus shape). Built from a
/// full horizontal bar plus two vertical stubs so the segments never
/// overlap: overlapping segments would double the node density in the
/// junction square and skew every degree-based statistic there.
inline DeploymentSpec plus_spec(double arm, double width, double density, double comm_radius,
                                std::uint64_t seed) {
    DeploymentSpec spec;
    spec.segments.push_back(street({{-arm, 0}, {arm, 0}}, width, density));
    spec.segments.push_back(street({{0, width / 2}, {0, arm}}, width, density));
    spec.segments.push_back(street({{0, -width / 2}, {0, -arm}}, width, density));
    spec.comm_radius = comm_radius;
    spec.seed = seed;
    return spec;
}

// ---- oracles ----

/// O(n^2) unit-disk edges (closed disk), pairs (lo, hi) sorted.
inline std::vector<std::pair<NodeId, NodeId>> brute_force_unit_disk(
    const std::vector<Point2D>& pts, double r) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i].distance(pts[j]) <= r)
                edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    return edges;
}

/// O(n^2) close-but-nonadjacent pairs over positioned nodes.
inline std::vector<std::pair<NodeId, NodeId>> brute_force_close_pairs(const Placement& p,
                                                                      const CommGraph& g,
                                                                      double min_dist) {
    std::vector<std::pair<NodeId, NodeId>> out;
    const std::size_t n = p.coords.size();
    for (NodeId a = 0; a < n; ++a) {
        if (!p.coords[a]) continue;
        for (NodeId b = a + 1; b < n; ++b) {
            if (!p.coords[b]) continue;
            if (g.has_edge(a, b)) continue;
            if (p.coords[a]->distance(*p.coords[b]) < min_dist) out.emplace_back(a, b);
        }
    }
    return out;
}

/// Textbook Dijkstra over measured edge lengths; infinity when unreachable.
inline std::vector<double> dijkstra_measured(const CommGraph& g, const RangingTable& rt,
                                             NodeId src) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.node_count(), kInf);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (NodeId u : g.neighbors(v)) {
            const auto w = rt.measured(v, u);
            if (!w) continue;
            if (d + *w < dist[u]) {
                dist[u] = d + *w;
                pq.push({dist[u], u});
            }
        }
    }
    return dist;
}

struct OracleRoute {
    std::vector<ClusterId> path;
    double weight = 0;
    bool found = false;
};

/// Exhaustive simple-path enumeration on a cluster graph. Minimizes hops
/// or summed energy cost, or maximizes the bottleneck bandwidth; among
/// weight-optimal paths returns the lexicographically smallest sequence.
inline OracleRoute exhaustive_route(const ClusterGraph& cg, ClusterId src, ClusterId dst,
                                    RouteWeight weight) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const bool widest = weight == RouteWeight::bandwidth_bottleneck;
    OracleRoute best;
    std::vector<ClusterId> path{src};
    std::vector<ClusterId> on_path{src};

    auto edge_value = [&](ClusterId a, ClusterId b) -> double {
        const ClusterEdgeAttrs* attrs = cg.attrs(a, b);
        switch (weight) {
            case RouteWeight::hops: return 1.0;
            case RouteWeight::energy:
                return (!attrs || attrs->residual_energy <= 0) ? kInf
                                                               : 1.0 / attrs->residual_energy;
            case RouteWeight::bandwidth_bottleneck: return attrs ? attrs->bandwidth : 0.0;
        }
        return 1.0;
    };
    auto better = [&](double cand_w, const std::vector<ClusterId>& cand) {
        if (!best.found) return true;
        if (widest ? cand_w > best.weight : cand_w < best.weight) return true;
        if (cand_w == best.weight && cand < best.path) return true;
        return false;
    };

    auto dfs = [&](auto&& self, ClusterId v, double w) -> void {
        if (v == dst) {
            if (better(w, path)) best = {path, w, true};
            return;
        }
        for (ClusterId u : cg.neighbors(v)) {
            if (std::find(on_path.begin(), on_path.end(), u) != on_path.end()) continue;
            const double e = edge_value(v, u);
            double nw;
            if (widest) {
                nw = path.size() == 1 ? e : std::min(w, e);
            } else {
                if (e == kInf) continue;
                nw = w + e;
            }
            path.push_back(u);
            on_path.push_back(u);
            self(self, u, nw);
            path.pop_back();
            on_path.pop_back();
        }
    };
    if (src == dst) return {{src}, 0, true};
    dfs(dfs, src, widest ? kInf : 0.0);
    return best;
}

/// Unit-capacity undirected max flow via BFS augmenting paths. Upper
/// bounds the number of edge-disjoint cluster paths.
inline int unit_edge_max_flow(const ClusterGraph& cg, ClusterId src, ClusterId dst) {
    if (src == dst) return 0;
    // residual capacity per directed pair
    std::map<std::pair<ClusterId, ClusterId>, int> cap;
    for (auto [a, b] : cg.edges) {
        cap[{a, b}] = 1;
        cap[{b, a}] = 1;
    }
    int flow = 0;
    while (true) {
        std::map<ClusterId, ClusterId> parent;
        std::queue<ClusterId> q;
        q.push(src);
        parent[src] = src;
        while (!q.empty() && !parent.count(dst)) {
            ClusterId v = q.front();
            q.pop();
            for (auto& [key, c] : cap) {
                if (key.first != v || c <= 0 || parent.count(key.second)) continue;
                parent[key.second] = v;
                q.push(key.second);
            }
        }
        if (!parent.count(dst)) break;
        for (ClusterId v = dst; v != src; v = parent[v]) {
            cap[{parent[v], v}] -= 1;
            cap[{v, parent[v]}] += 1;
        }
        ++flow;
    }
    return flow;
}

/// Reference similarity alignment by dense rotation-angle scan with
/// closed-form scale/translation per angle. Returns the best RMS found;
/// an exact solver must do at least this well (minus grid resolution).
inline double grid_scan_alignment_rms(const Placement& placement,
                                      const std::vector<Point2D>& truth, bool allow_reflection,
                                      bool allow_scale) {
    std::vector<Point2D> p, q;
    for (std::size_t i = 0; i < placement.coords.size(); ++i) {
        if (!placement.coords[i]) continue;
        p.push_back(*placement.coords[i]);
        q.push_back(truth[i]);
    }
    const std::size_t m = p.size();
    if (m == 0) return 0;
    Point2D pc{0, 0}, qc{0, 0};
    for (std::size_t i = 0; i < m; ++i) {
        pc.x += p[i].x;
        pc.y += p[i].y;
        qc.x += q[i].x;
        qc.y += q[i].y;
    }
    pc.x /= m;
    pc.y /= m;
    qc.x /= m;
    qc.y /= m;

    double best = std::numeric_limits<double>::infinity();
    const int kSteps = 20000;
    for (int mirror = 0; mirror <= (allow_reflection ? 1 : 0); ++mirror) {
        for (int k = 0; k < kSteps; ++k) {
            const double theta = 2.0 * M_PI * k / kSteps;
            const double ct = std::cos(theta), st = std::sin(theta);
            // rotated/mirrored centered source, then optimal scale
            double dot = 0, pp = 0, sse = 0;
            std::vector<Point2D> rp(m);
            for (std::size_t i = 0; i < m; ++i) {
                double px = p[i].x - pc.x, py = p[i].y - pc.y;
                if (mirror) py = -py;
                rp[i] = {ct * px - st * py, st * px + ct * py};
                const double qx = q[i].x - qc.x, qy = q[i].y - qc.y;
                dot += rp[i].x * qx + rp[i].y * qy;
                pp += px * px + py * py;
            }
            const double s = (allow_scale && pp > 0) ? dot / pp : 1.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double qx = q[i].x - qc.x, qy = q[i].y - qc.y;
                const double dx = s * rp[i].x - qx, dy = s * rp[i].y - qy;
                sse += dx * dx + dy * dy;
            }
            best = std::min(best, std::sqrt(sse / m));
        }
    }
    return best;
}

/// Plain BFS hop count between two nodes, no restrictions.
inline std::uint32_t bfs_shortest_hops(const CommGraph& g, NodeId src, NodeId dst) {
    const auto hops = bfs_hops(g, src);
    return hops[dst];
}

}  // namespace support
