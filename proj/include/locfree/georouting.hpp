#pragma once

#include <optional>
#include <vector>

#include "locfree/clustergraph.hpp"
#include "locfree/graph.hpp"
#include "locfree/localization.hpp"
#include "locfree/netgen.hpp"
#include "locfree/types.hpp"

namespace locfree {

enum class RouteOutcome { delivered, local_minimum, no_route };

struct RouteResult {
    std::vector<NodeId> path;  // starts at src; ends at the final holder
    RouteOutcome outcome = RouteOutcome::no_route;
    std::uint32_t hop_count = 0;
    std::optional<NodeId> stuck_node;
    std::optional<std::size_t> failed_leg;  // cluster-path expansion only
    /// Ground-truth audit (when an instance is supplied): true distance of
    /// the final holder to the target, and whether a "delivered" packet in
    /// fact ended up far away because the holder is mislocated.
    std::optional<double> true_target_distance;
    bool mislocated = false;
};

/// Greedy forwarding on placed coordinates toward a target point. Each
/// step goes to the neighbor strictly closest to the target (ties: lowest
/// id); no closer neighbor, or re-entering a visited node, is a local
/// minimum. Delivery means placed distance <= delivery_radius.
RouteResult greedy_geo_route(const Placement& placement, const CommGraph& graph, NodeId src,
                             Point2D target, double delivery_radius,
                             const NetworkInstance* audit_instance = nullptr,
                             double audit_factor = 2.0);

enum class RouteWeight { hops, energy, bandwidth_bottleneck };

struct ClusterRoute {
    std::vector<ClusterId> cluster_path;
    double total_weight = 0;  // hop count, summed energy cost, or bottleneck bandwidth
    bool found = false;
};

/// Optimal path in the cluster graph. hops minimizes edge count, energy
/// minimizes summed 1/residual_energy, bandwidth_bottleneck maximizes the
/// smallest edge bandwidth. Equal-weight candidates resolve to the
/// lexicographically smallest cluster sequence.
ClusterRoute cluster_route(const ClusterGraph& cg, ClusterId src, ClusterId dst,
                           RouteWeight weight);

/// Walks a cluster path on the node level: per leg a BFS inside the union
/// of the current and next cluster to the nearest node of the next
/// cluster, then a final BFS inside the last cluster to dst.
RouteResult expand_cluster_path(const std::vector<ClusterId>& cluster_path,
                                const Clustering& clustering, const CommGraph& graph, NodeId src,
                                NodeId dst);

/// Up to k pairwise edge-disjoint cluster paths (hop metric), found by
/// successive shortest paths with edge removal. May return fewer than k.
std::vector<ClusterRoute> disjoint_cluster_paths(const ClusterGraph& cg, ClusterId src,
                                                 ClusterId dst, int k);

const char* route_outcome_string(RouteOutcome o);

}  // namespace locfree
