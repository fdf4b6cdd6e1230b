#include "locfree/local_view.hpp"

#include <algorithm>
#include <deque>

namespace locfree {

LocalView::LocalView(const CommGraph& graph, NodeId self, LocalityAudit* audit, int hop_horizon)
    : graph_(&graph), self_(self), audit_(audit), horizon_(hop_horizon) {}

bool LocalView::within_horizon(NodeId u) const {
    if (u == self_) return true;
    if (horizon_ == 1) return graph_->has_edge(self_, u);
    if (!ball_built_) {
        std::deque<std::pair<NodeId, int>> queue{{self_, 0}};
        std::vector<NodeId> seen{self_};
        while (!queue.empty()) {
            auto [v, d] = queue.front();
            queue.pop_front();
            if (d == horizon_) continue;
            for (NodeId w : graph_->neighbors(v)) {
                if (!std::binary_search(seen.begin(), seen.end(), w)) {
                    seen.insert(std::lower_bound(seen.begin(), seen.end(), w), w);
                    queue.emplace_back(w, d + 1);
                }
            }
        }
        ball_ = std::move(seen);
        ball_built_ = true;
    }
    return std::binary_search(ball_.begin(), ball_.end(), u);
}

void LocalView::note_state_access(NodeId u) {
    if (!audit_) return;
    if (within_horizon(u)) {
        ++audit_->local_reads;
    } else {
        audit_->note_violation("node " + std::to_string(self_) + " touched state of node " +
                               std::to_string(u) + " outside its horizon");
    }
}

void LocalView::note_ranging_access(NodeId a, NodeId b) {
    if (!audit_) return;
    if (within_horizon(a) || within_horizon(b)) {
        ++audit_->local_reads;
    } else {
        audit_->note_violation("node " + std::to_string(self_) + " read ranging (" +
                               std::to_string(a) + "," + std::to_string(b) +
                               ") with no endpoint in its horizon");
    }
}

void LocalView::note_aggregate_access() {
    if (audit_) ++audit_->aggregate_reads;
}

std::vector<std::uint32_t> audited_hop_flood(const CommGraph& graph, NodeId start,
                                             LocalityAudit* audit) {
    std::vector<std::uint32_t> hops(graph.node_count(), kUnreachableHops);
    hops[start] = 0;
    std::deque<NodeId> queue{start};
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        LocalView view(graph, v, audit);
        for (NodeId u : view.neighbors()) {
            view.note_state_access(u);
            if (hops[u] != kUnreachableHops) continue;
            hops[u] = hops[v] + 1;
            queue.push_back(u);
        }
    }
    return hops;
}

}  // namespace locfree
