#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "locfree/types.hpp"

namespace locfree {

/// Undirected communication graph over dense node ids 0..n-1.
/// Adjacency lists are sorted; the structure is symmetric and irreflexive.
class CommGraph {
public:
    CommGraph() = default;
    explicit CommGraph(std::size_t node_count) : adj_(node_count) {}

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const;

    std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
    std::size_t degree(NodeId v) const { return adj_[v].size(); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Bulk construction from an edge list; sorts and deduplicates.
    static CommGraph from_edges(std::size_t node_count,
                                const std::vector<std::pair<NodeId, NodeId>>& edges);

    bool operator==(const CommGraph& other) const { return adj_ == other.adj_; }

private:
    std::vector<std::vector<NodeId>> adj_;
};

/// Hop distances from `start` (kInvalidNode distance = unreachable is
/// encoded as kUnreachableHops).
inline constexpr std::uint32_t kUnreachableHops = 0xffffffffu;

std::vector<std::uint32_t> bfs_hops(const CommGraph& graph, NodeId start);

/// Multi-source variant; every source starts at hop 0.
std::vector<std::uint32_t> bfs_hops(const CommGraph& graph, const std::vector<NodeId>& starts);

/// BFS shortest path (fewest hops, lexicographically smallest on ties by
/// construction: neighbors are visited in sorted order). Empty if
/// unreachable.
std::vector<NodeId> bfs_path(const CommGraph& graph, NodeId from, NodeId to);

bool is_connected(const CommGraph& graph);

}  // namespace locfree
