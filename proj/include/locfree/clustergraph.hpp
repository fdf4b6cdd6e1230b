#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "locfree/graph.hpp"
#include "locfree/local_view.hpp"
#include "locfree/types.hpp"

namespace locfree {

struct BoundaryParams {
    int hop_horizon = 2;             // neighborhood depth for the degree comparison
    double degree_fraction = 0.6;    // boundary when own degree < fraction * local max
};

struct BoundaryInfo {
    std::vector<bool> is_boundary;
    /// Connected components of the boundary-induced subgraph, each sorted by
    /// node id, ordered by smallest member.
    std::vector<std::vector<NodeId>> strips;
};

/// Degree-dip boundary detection: a node is boundary when its own degree
/// falls clearly below the maximum degree within its h-hop neighborhood.
BoundaryInfo detect_boundary(const CommGraph& graph, const BoundaryParams& params = {},
                             LocalityAudit* audit = nullptr);

enum class ClusterKind : std::uint8_t { street, intersection, other };

struct Clustering {
    std::vector<ClusterId> assignment;  // per node
    std::vector<ClusterKind> kinds;     // per cluster

    std::size_t cluster_count() const { return kinds.size(); }
    std::vector<std::vector<NodeId>> members() const;
};

struct ClusterParams {
    BoundaryParams boundary;
    int side_horizon = 4;               // max ball radius for counting boundary sides
    std::size_t min_cluster_size = 5;   // smaller clusters merge into a neighbor
};

/// Topology-only clustering. Interior nodes count the connected boundary
/// pieces visible within their ball (swept over radii up to side_horizon,
/// keeping the maximum count): two opposing pieces read as a street
/// corridor, three or more as an intersection. Clusters are the
/// connected components of equal-kind core nodes; remaining nodes join an
/// adjacent cluster in synchronized adoption rounds, and undersized
/// clusters merge into their closest neighbor.
Clustering build_clusters(const CommGraph& graph, const BoundaryInfo& boundary,
                          const ClusterParams& params = {}, LocalityAudit* audit = nullptr);

/// Clustering from externally supplied per-node labels (e.g. sensed street
/// names): clusters are connected components of equal labels, kind
/// defaults to other.
Clustering clusters_from_labels(const CommGraph& graph, const std::vector<int>& labels);

enum class ClusterGraphVariant : std::uint8_t { cluster_per_vertex, street_as_edge };

struct ClusterEdgeAttrs {
    double residual_energy = 0;   // joules, mean over the border zone
    double bandwidth = 0;         // bits/s, minimum over the border zone
    std::uint32_t node_count = 0;
};

struct ClusterGraph {
    ClusterGraphVariant variant = ClusterGraphVariant::cluster_per_vertex;
    std::vector<ClusterId> vertices;                     // sorted
    std::vector<std::pair<ClusterId, ClusterId>> edges;  // lo < hi, sorted
    std::unordered_map<ClusterId, ClusterKind> kind;
    std::unordered_map<ClusterId, std::uint32_t> node_count;
    std::unordered_map<std::uint64_t, ClusterEdgeAttrs> edge_attrs;  // key: pair_key(lo, hi)
    /// street_as_edge only: edge key -> the street cluster it replaced.
    std::unordered_map<std::uint64_t, ClusterId> contracted_street;

    bool has_vertex(ClusterId c) const;
    bool has_edge(ClusterId a, ClusterId b) const;
    const ClusterEdgeAttrs* attrs(ClusterId a, ClusterId b) const;
    std::vector<ClusterId> neighbors(ClusterId c) const;  // sorted
};

/// Contracts the clustering to its adjacency structure. street_as_edge
/// additionally turns each street cluster touching exactly two
/// intersection clusters (and nothing else) into a single edge between
/// them; other street clusters stay vertices.
ClusterGraph build_cluster_graph(const Clustering& clustering, const CommGraph& graph,
                                 ClusterGraphVariant variant);

struct NodeAttrs {
    double residual_energy = 0;  // joules
    double bandwidth = 0;        // bits/s
};

/// Fills edge attributes from the nodes forming each border zone (the
/// endpoints of cut edges): mean residual energy, bottleneck bandwidth.
void annotate_edges(ClusterGraph& cg, const Clustering& clustering, const CommGraph& graph,
                    const std::vector<NodeAttrs>& node_attrs);

struct NodeLocation {
    ClusterId cluster = 0;
    ClusterKind kind = ClusterKind::other;
    std::vector<ClusterId> neighbor_clusters;  // sorted
};

/// The symbolic location answer a node can give without coordinates.
NodeLocation node_location(const Clustering& clustering, const ClusterGraph& cg, NodeId v);

const char* cluster_kind_string(ClusterKind k);

}  // namespace locfree
