#pragma once

#include <optional>
#include <span>
#include <vector>

#include "locfree/graph.hpp"
#include "locfree/local_view.hpp"
#include "locfree/netgen.hpp"
#include "locfree/types.hpp"

namespace locfree {

enum class Frame { global, virtual_frame };

/// Computed coordinate assignment. A node without an estimate stays
/// nullopt, never a junk value. In the global frame every anchor holds its
/// true coordinates.
struct Placement {
    std::vector<std::optional<Point2D>> coords;
    Frame frame = Frame::global;

    std::size_t positioned_count() const {
        std::size_t n = 0;
        for (const auto& c : coords)
            if (c) ++n;
        return n;
    }
};

/// Anchor ids (sorted) with their true positions, parallel arrays.
struct AnchorInfo {
    std::vector<NodeId> ids;
    std::vector<Point2D> positions;

    std::size_t size() const { return ids.size(); }
    std::optional<Point2D> position_of(NodeId anchor) const;
    static AnchorInfo from_instance(const NetworkInstance& instance);
};

/// Per-node distance estimates to anchors (phase 1 output). Entries per
/// node are sorted by anchor id.
class DistanceEstimates {
public:
    DistanceEstimates() = default;
    explicit DistanceEstimates(std::size_t node_count) : est_(node_count) {}

    void set(NodeId v, NodeId anchor, double dist);
    std::optional<double> get(NodeId v, NodeId anchor) const;
    std::span<const std::pair<NodeId, double>> for_node(NodeId v) const { return est_[v]; }
    std::size_t count(NodeId v) const { return est_[v].size(); }
    std::size_t node_count() const { return est_.size(); }

private:
    std::vector<std::vector<std::pair<NodeId, double>>> est_;
};

enum class Phase1 { dv_hop, sum_dist, euclidean };
enum class Phase2 { lateration, min_max };
enum class Phase3 { none, iterative_lateration, spring };

struct SpringParams {
    double step = 0.25;    // fraction of the mean incident residual applied per round
    double decay = 0.995;  // geometric step decay
    int rounds = 400;
};

struct PipelineConfig {
    Phase1 phase1 = Phase1::dv_hop;
    Phase2 phase2 = Phase2::lateration;
    Phase3 phase3 = Phase3::iterative_lateration;
    int refinement_rounds = 50;
    int min_anchors_for_fix = 3;
    double convergence_tol = -1.0;  // < 0 means 1e-3 * comm_radius
    SpringParams spring;
};

enum class PipelineName { adhoc_positioning, robust_positioning, nhop_multilateration, afl };

/// Canonical phase combination for each named algorithm.
PipelineConfig pipeline_config_for(PipelineName name);

// ---- phase 1: anchor distance estimation ----

/// Hop counts flooded from every anchor; each anchor publishes the ratio of
/// summed true anchor distances to summed hop counts; nodes scale the hop
/// count by the correction of their hop-nearest anchor. Nodes whose nearest
/// anchor has no defined correction fall back to the mean of the defined
/// ones.
DistanceEstimates dv_hop(const CommGraph& graph, const AnchorInfo& anchors,
                         LocalityAudit* audit = nullptr);

/// Cheapest measured-path cost from each anchor, computed as a local flood
/// of monotone improvements.
DistanceEstimates sum_dist(const CommGraph& graph, const RangingTable& ranging,
                           const std::vector<NodeId>& anchors, LocalityAudit* audit = nullptr);

/// Two-triangle propagation: a node gains an estimate to an anchor once two
/// mutually-adjacent neighbors hold estimates and the three connecting
/// ranging values are known. The mirror ambiguity is resolved by agreement
/// between independent neighbor pairs; with a single pair the quadruple is
/// discarded.
DistanceEstimates euclidean_propagation(const CommGraph& graph, const RangingTable& ranging,
                                        const AnchorInfo& anchors, LocalityAudit* audit = nullptr);

// ---- phase 2: position computation ----

struct LaterationStats {
    std::size_t condition_rejections = 0;
    std::size_t underdetermined = 0;
};

/// Linearized least squares against anchor circles (last anchor's equation
/// subtracted from the rest, normal equations with a condition guard).
/// Nodes with fewer than min_anchors estimates or an ill-conditioned system
/// stay unpositioned. Anchors are pinned to their true coordinates.
Placement lateration(const DistanceEstimates& est, const AnchorInfo& anchors, int min_anchors,
                     LaterationStats* stats = nullptr, LocalityAudit* audit = nullptr);

/// Center of the intersection of per-anchor squares (half side = distance
/// estimate); clipped bounds are used even when the intersection is empty.
Placement min_max_box(const DistanceEstimates& est, const AnchorInfo& anchors, int min_anchors,
                      LocalityAudit* audit = nullptr);

// ---- phase 3: refinement ----

/// Synchronized rounds of per-node lateration against positioned neighbors
/// and measured edge distances. Pinned nodes never move; the returned
/// placement is the lowest-stress iterate encountered (including the
/// start).
Placement iterative_lateration_refine(const Placement& start, const CommGraph& graph,
                                      const RangingTable& ranging,
                                      const std::vector<NodeId>& pinned, int rounds, double tol,
                                      LocalityAudit* audit = nullptr);

/// Force-directed relaxation along measured-vs-placed residuals with a
/// geometrically decaying step; returns the lowest-stress iterate.
Placement spring_embedder(const Placement& start, const CommGraph& graph,
                          const RangingTable& ranging, const SpringParams& params,
                          const std::vector<NodeId>& pinned, LocalityAudit* audit = nullptr);

/// Anchor-free start: two heuristically chosen far-apart node pairs define
/// perpendicular axes; coordinates are half hop-count differences scaled by
/// the mean measured edge length. frame = virtual.
Placement afl_bootstrap(const CommGraph& graph, const RangingTable& ranging,
                        LocalityAudit* audit = nullptr);

/// Runs the named algorithm as its canonical phase composition; numeric
/// knobs (rounds, tolerances, spring schedule) come from config.
Placement run_pipeline(PipelineName name, const NetworkInstance& instance,
                       const RangingTable& ranging, const PipelineConfig& config,
                       LocalityAudit* audit = nullptr);

/// Arbitrary phase combination for the three anchor-based phase slots.
Placement run_phases(const PipelineConfig& config, const NetworkInstance& instance,
                     const RangingTable& ranging, LocalityAudit* audit = nullptr);

const char* pipeline_name_string(PipelineName name);
std::optional<PipelineName> pipeline_name_from_string(std::string_view s);

}  // namespace locfree
