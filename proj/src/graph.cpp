#include "locfree/graph.hpp"

#include <algorithm>
#include <deque>

namespace locfree {

std::size_t CommGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& list : adj_) twice += list.size();
    return twice / 2;
}

bool CommGraph::has_edge(NodeId u, NodeId v) const {
    if (u >= adj_.size()) return false;
    const auto& list = adj_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

CommGraph CommGraph::from_edges(std::size_t node_count,
                                const std::vector<std::pair<NodeId, NodeId>>& edges) {
    CommGraph g(node_count);
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& list : g.adj_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return g;
}

std::vector<std::uint32_t> bfs_hops(const CommGraph& graph, NodeId start) {
    return bfs_hops(graph, std::vector<NodeId>{start});
}

std::vector<std::uint32_t> bfs_hops(const CommGraph& graph, const std::vector<NodeId>& starts) {
    std::vector<std::uint32_t> hops(graph.node_count(), kUnreachableHops);
    std::deque<NodeId> queue;
    for (NodeId s : starts) {
        if (hops[s] != 0) {
            hops[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        for (NodeId u : graph.neighbors(v)) {
            if (hops[u] == kUnreachableHops) {
                hops[u] = hops[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return hops;
}

std::vector<NodeId> bfs_path(const CommGraph& graph, NodeId from, NodeId to) {
    std::vector<NodeId> parent(graph.node_count(), kInvalidNode);
    std::deque<NodeId> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        if (v == to) break;
        for (NodeId u : graph.neighbors(v)) {
            if (parent[u] == kInvalidNode) {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    if (parent[to] == kInvalidNode) return {};
    std::vector<NodeId> path{to};
    for (NodeId v = to; v != from; v = parent[v]) path.push_back(parent[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

bool is_connected(const CommGraph& graph) {
    if (graph.node_count() == 0) return true;
    const auto hops = bfs_hops(graph, NodeId{0});
    for (std::uint32_t h : hops)
        if (h == kUnreachableHops) return false;
    return true;
}

}  // namespace locfree
