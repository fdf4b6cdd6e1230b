#include "locfree/georouting.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

namespace locfree {

RouteResult greedy_geo_route(const Placement& placement, const CommGraph& graph, NodeId src,
                             Point2D target, double delivery_radius,
                             const NetworkInstance* audit_instance, double audit_factor) {
    const std::size_t n = graph.node_count();
    if (src >= n) throw std::invalid_argument("greedy_geo_route: src out of range");
    if (placement.coords.size() != n)
        throw std::invalid_argument("greedy_geo_route: placement size does not match graph");

    RouteResult r;
    r.path.push_back(src);
    if (!placement.coords[src]) {
        r.outcome = RouteOutcome::no_route;
        r.stuck_node = src;
        return r;
    }

    std::vector<char> visited(n, 0);
    visited[src] = 1;
    NodeId cur = src;
    for (std::size_t step = 0; step <= n; ++step) {
        const double d_cur = placement.coords[cur]->distance(target);
        if (d_cur <= delivery_radius) {
            r.outcome = RouteOutcome::delivered;
            break;
        }
        NodeId best = kInvalidNode;
        double best_d = d_cur;
        bool any_positioned = false;
        for (NodeId u : graph.neighbors(cur)) {
            if (!placement.coords[u]) continue;
            any_positioned = true;
            const double d = placement.coords[u]->distance(target);
            if (d < best_d) {  // strict: equal distance never advances
                best = u;
                best_d = d;
            }
        }
        if (best == kInvalidNode) {
            r.outcome = any_positioned ? RouteOutcome::local_minimum : RouteOutcome::no_route;
            r.stuck_node = cur;
            break;
        }
        if (visited[best]) {
            r.outcome = RouteOutcome::local_minimum;
            r.stuck_node = cur;
            break;
        }
        visited[best] = 1;
        r.path.push_back(best);
        cur = best;
    }
    r.hop_count = static_cast<std::uint32_t>(r.path.size() - 1);

    if (audit_instance) {
        const NodeId holder = r.path.back();
        r.true_target_distance = audit_instance->positions[holder].distance(target);
        if (r.outcome == RouteOutcome::delivered)
            r.mislocated = *r.true_target_distance > audit_factor * delivery_radius;
    }
    return r;
}

namespace {

struct Label {
    double primary;  // cost to minimize, or negated bottleneck to minimize
    std::vector<ClusterId> path;

    bool operator<(const Label& o) const {
        if (primary != o.primary) return primary < o.primary;
        return path < o.path;
    }
};

double edge_cost(const ClusterGraph& cg, ClusterId a, ClusterId b, RouteWeight weight) {
    switch (weight) {
        case RouteWeight::hops:
            return 1.0;
        case RouteWeight::energy: {
            const ClusterEdgeAttrs* attrs = cg.attrs(a, b);
            if (!attrs || attrs->residual_energy <= 0)
                return std::numeric_limits<double>::infinity();  // drained border, unusable
            return 1.0 / attrs->residual_energy;
        }
        case RouteWeight::bandwidth_bottleneck: {
            const ClusterEdgeAttrs* attrs = cg.attrs(a, b);
            return attrs ? attrs->bandwidth : 0.0;
        }
    }
    return 1.0;
}

}  // namespace

ClusterRoute cluster_route(const ClusterGraph& cg, ClusterId src, ClusterId dst,
                           RouteWeight weight) {
    if (!cg.has_vertex(src) || !cg.has_vertex(dst))
        throw std::invalid_argument("cluster_route: src or dst is not a cluster-graph vertex");

    ClusterRoute out;
    if (src == dst) {
        out.cluster_path = {src};
        out.total_weight = 0;
        out.found = true;
        return out;
    }

    const bool widest = weight == RouteWeight::bandwidth_bottleneck;
    // Uniform-cost search with the path as tie-breaker; the frontier is an
    // ordered set so equal-cost candidates settle in lexicographic order.
    std::set<Label> frontier;
    std::set<ClusterId> settled;
    frontier.insert({widest ? -std::numeric_limits<double>::infinity() : 0.0, {src}});
    while (!frontier.empty()) {
        Label cur = *frontier.begin();
        frontier.erase(frontier.begin());
        const ClusterId v = cur.path.back();
        if (settled.count(v)) continue;
        settled.insert(v);
        if (v == dst) {
            out.cluster_path = std::move(cur.path);
            out.total_weight = widest ? -cur.primary : cur.primary;
            out.found = true;
            return out;
        }
        for (ClusterId u : cg.neighbors(v)) {
            if (settled.count(u)) continue;
            if (std::find(cur.path.begin(), cur.path.end(), u) != cur.path.end()) continue;
            const double c = edge_cost(cg, v, u, weight);
            double primary;
            if (widest) {
                primary = std::max(cur.primary, -c);  // negated min of bandwidths
            } else {
                if (std::isinf(c)) continue;
                primary = cur.primary + c;
            }
            Label next{primary, cur.path};
            next.path.push_back(u);
            frontier.insert(std::move(next));
        }
    }
    return out;  // not found
}

RouteResult expand_cluster_path(const std::vector<ClusterId>& cluster_path,
                                const Clustering& clustering, const CommGraph& graph, NodeId src,
                                NodeId dst) {
    const std::size_t n = graph.node_count();
    if (src >= n || dst >= n) throw std::invalid_argument("expand_cluster_path: node out of range");
    if (clustering.assignment.size() != n)
        throw std::invalid_argument("expand_cluster_path: clustering does not match graph");
    if (cluster_path.empty())
        throw std::invalid_argument("expand_cluster_path: empty cluster path");
    if (clustering.assignment[src] != cluster_path.front())
        throw std::invalid_argument("expand_cluster_path: src not in first cluster");
    if (clustering.assignment[dst] != cluster_path.back())
        throw std::invalid_argument("expand_cluster_path: dst not in last cluster");

    RouteResult r;
    r.path.push_back(src);
    NodeId cur = src;

    // BFS restricted to `allowed`, returning the path to the (depth, id)
    // smallest node satisfying `goal`, or empty when unreachable.
    auto restricted_bfs = [&](NodeId from, auto&& allowed, auto&& goal) -> std::vector<NodeId> {
        std::vector<std::uint32_t> depth(n, kUnreachableHops);
        std::vector<NodeId> parent(n, kInvalidNode);
        std::deque<NodeId> queue{from};
        depth[from] = 0;
        NodeId found = kInvalidNode;
        std::uint32_t found_depth = kUnreachableHops;
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            if (depth[v] >= found_depth) break;  // deeper than the first hit
            if (goal(v)) {
                if (v < found || found == kInvalidNode) found = v;
                found_depth = depth[v];
                continue;
            }
            for (NodeId u : graph.neighbors(v)) {
                if (!allowed(u) || depth[u] != kUnreachableHops) continue;
                depth[u] = depth[v] + 1;
                parent[u] = v;
                queue.push_back(u);
            }
        }
        if (found == kInvalidNode) return {};
        std::vector<NodeId> path;
        for (NodeId v = found; v != kInvalidNode; v = parent[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
    };

    auto fail = [&](std::size_t leg) {
        r.outcome = RouteOutcome::no_route;
        r.stuck_node = cur;
        r.failed_leg = leg;
        r.hop_count = static_cast<std::uint32_t>(r.path.size() - 1);
        return r;
    };

    for (std::size_t i = 0; i + 1 < cluster_path.size(); ++i) {
        const ClusterId here = cluster_path[i];
        const ClusterId next = cluster_path[i + 1];
        auto leg = restricted_bfs(
            cur,
            [&](NodeId u) {
                return clustering.assignment[u] == here || clustering.assignment[u] == next;
            },
            [&](NodeId u) { return clustering.assignment[u] == next; });
        if (leg.empty()) return fail(i);
        r.path.insert(r.path.end(), leg.begin() + 1, leg.end());
        cur = leg.back();
    }
    {
        const ClusterId last = cluster_path.back();
        auto leg = restricted_bfs(
            cur, [&](NodeId u) { return clustering.assignment[u] == last; },
            [&](NodeId u) { return u == dst; });
        if (leg.empty()) return fail(cluster_path.size() - 1);
        r.path.insert(r.path.end(), leg.begin() + 1, leg.end());
    }
    r.outcome = RouteOutcome::delivered;
    r.hop_count = static_cast<std::uint32_t>(r.path.size() - 1);
    return r;
}

std::vector<ClusterRoute> disjoint_cluster_paths(const ClusterGraph& cg, ClusterId src,
                                                 ClusterId dst, int k) {
    std::vector<ClusterRoute> out;
    if (k <= 0) return out;
    ClusterGraph residual = cg;
    for (int i = 0; i < k; ++i) {
        ClusterRoute route = cluster_route(residual, src, dst, RouteWeight::hops);
        if (!route.found) break;
        for (std::size_t j = 0; j + 1 < route.cluster_path.size(); ++j) {
            const ClusterId a = route.cluster_path[j];
            const ClusterId b = route.cluster_path[j + 1];
            const auto key = std::minmax(a, b);
            auto it = std::find(residual.edges.begin(), residual.edges.end(),
                                std::make_pair(key.first, key.second));
            if (it != residual.edges.end()) residual.edges.erase(it);
            residual.edge_attrs.erase(pair_key(a, b));
        }
        out.push_back(std::move(route));
        if (src == dst) break;  // degenerate, one empty path is enough
    }
    return out;
}

const char* route_outcome_string(RouteOutcome o) {
    switch (o) {
        case RouteOutcome::delivered: return "delivered";
        case RouteOutcome::local_minimum: return "local_minimum";
        case RouteOutcome::no_route: return "no_route";
    }
    return "no_route";
}

}  // namespace locfree
