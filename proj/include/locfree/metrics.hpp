#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "locfree/graph.hpp"
#include "locfree/localization.hpp"
#include "locfree/netgen.hpp"
#include "locfree/types.hpp"

namespace locfree {

/// Connected pair placed farther apart than the radio range allows.
struct C1Violation {
    NodeId a = kInvalidNode;
    NodeId b = kInvalidNode;
    double placed_dist = 0;
};

/// Non-adjacent pair placed within radio range.
struct C2Violation {
    NodeId a = kInvalidNode;
    NodeId b = kInvalidNode;
    double placed_dist = 0;
};

/// Pair that is far apart in truth but nearly coincident in the placement.
struct FoldPair {
    NodeId a = kInvalidNode;
    NodeId b = kInvalidNode;
    double true_dist = 0;
    double placed_dist = 0;
};

std::vector<C1Violation> check_c1(const Placement& placement, const CommGraph& graph,
                                  double max_dist, std::size_t* skipped_edges = nullptr);

std::vector<C2Violation> check_c2(const Placement& placement, const CommGraph& graph,
                                  double min_dist);

/// Pairs with true distance > far_factor*r and placed distance
/// < near_factor*r; grid-accelerated over the placed coordinates.
std::vector<FoldPair> detect_folds(const Placement& placement, const NetworkInstance& instance,
                                   double far_factor = 5.0, double near_factor = 1.0);

struct AlignmentTransform {
    double rotation = 0;  // radians, applied before translation
    bool reflected = false;
    double scale = 1;
    double tx = 0;
    double ty = 0;
    bool low_confidence = false;  // near-degenerate geometry, transform unreliable
};

struct AlignResult {
    Placement aligned;
    AlignmentTransform transform;
    double rms = 0;  // over commonly positioned nodes, after alignment
};

/// Least-squares similarity transform (rotation + translation, optionally
/// reflection and uniform scale) onto the true coordinates, fit over the
/// positioned nodes.
AlignResult align(const Placement& placement, const std::vector<Point2D>& truth,
                  bool allow_reflection, bool allow_scale);

/// Mean squared difference between placed and measured edge lengths over
/// edges with both endpoints positioned.
double placement_stress(const Placement& placement, const CommGraph& graph,
                        const RangingTable& ranging);

struct MetricsParams {
    double c1_max_dist_factor = 1.0;   // of comm_radius
    double c2_min_dist_factor = 1.0;   // of comm_radius
    double fold_far_factor = 5.0;      // of comm_radius
    double fold_near_factor = 1.0;     // of comm_radius
    double align_rms_limit = -1.0;     // unused by evaluate, kept for experiment configs
};

struct ConsistencyReport {
    std::vector<C1Violation> c1_violations;
    std::vector<C2Violation> c2_violations;
    std::vector<FoldPair> fold_pairs;
    double rms_error = 0;  // against truth; virtual frames are aligned first
    std::size_t positioned = 0;
    std::size_t unpositioned = 0;
    std::size_t c1_skipped_edges = 0;
    AlignmentTransform applied_alignment;  // identity for global-frame input
};

/// Full consistency check. Virtual-frame placements are aligned (with
/// reflection and scale) before any distance-based check; global-frame
/// placements are evaluated as-is so errors stay absolute.
ConsistencyReport evaluate_placement(const Placement& placement, const NetworkInstance& instance,
                                     const MetricsParams& params = {});

struct RegionAggregate {
    std::optional<double> mean_by_placement;  // nullopt when no positioned node falls inside
    std::optional<double> mean_by_truth;
    bool alarm_by_placement = false;
    bool alarm_by_truth = false;
    std::size_t members_by_placement = 0;
    std::size_t members_by_truth = 0;
};

/// Mean of node_values over the nodes inside region, computed once with
/// membership decided by placed coordinates and once by true coordinates.
/// The alarm fires when the mean exceeds threshold.
RegionAggregate region_aggregate(const Placement& placement, const NetworkInstance& instance,
                                 const Rect& region, const std::vector<double>& node_values,
                                 double threshold);

}  // namespace locfree
