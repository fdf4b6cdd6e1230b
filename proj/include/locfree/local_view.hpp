#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locfree/graph.hpp"
#include "locfree/types.hpp"

namespace locfree {

/// Records every state access a round-based computation makes, so tests can
/// assert that node-level phases touch only legal state: the node itself,
/// its neighborhood (1 hop for localization phases, h hops for the
/// topology ops) and network-wide flooded aggregates.
struct LocalityAudit {
    std::uint64_t local_reads = 0;
    std::uint64_t aggregate_reads = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> violation_samples;  // capped at 16

    void note_violation(std::string what) {
        ++violations;
        if (violation_samples.size() < 16) violation_samples.push_back(std::move(what));
    }
};

/// Access guard bound to the node a phase is currently processing. Phase
/// code must route neighbor-state and ranging reads through this; with a
/// null audit the checks cost nothing beyond a branch.
class LocalView {
public:
    /// hop_horizon is the allowed neighborhood depth around `self`.
    LocalView(const CommGraph& graph, NodeId self, LocalityAudit* audit, int hop_horizon = 1);

    NodeId self() const { return self_; }
    std::span<const NodeId> neighbors() const { return graph_->neighbors(self_); }

    /// Declares a read (or message send) touching node u's published state.
    void note_state_access(NodeId u);

    /// Declares a ranging lookup. Legal when one endpoint is within the
    /// horizon (a node re-broadcasts its own measured edges to neighbors).
    void note_ranging_access(NodeId a, NodeId b);

    /// Declares a read of a flooded per-anchor or network-wide aggregate.
    void note_aggregate_access();

private:
    bool within_horizon(NodeId u) const;

    const CommGraph* graph_;
    NodeId self_;
    LocalityAudit* audit_;
    int horizon_;
    mutable std::vector<NodeId> ball_;        // sorted h-hop ball, built lazily
    mutable bool ball_built_ = false;
};

/// BFS hop counts from start, booking every hop-count message against the
/// sending node's local view.
std::vector<std::uint32_t> audited_hop_flood(const CommGraph& graph, NodeId start,
                                             LocalityAudit* audit);

}  // namespace locfree
