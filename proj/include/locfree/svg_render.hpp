#pragma once

#include <cstdint>
#include <string>

#include "locfree/clustergraph.hpp"
#include "locfree/localization.hpp"
#include "locfree/metrics.hpp"
#include "locfree/netgen.hpp"

namespace locfree {

/// Placement figure: nodes at placed coordinates, anchors filled, a
/// spanning tree plus a seed-fixed 10% sample of the remaining edges,
/// distance-violation pairs and fold pairs highlighted, plus a ground
/// truth inset for global-frame placements. Output is deterministic (no
/// timestamps); an all-unpositioned placement yields a warning banner.
std::string render_placement_svg(const NetworkInstance& instance, const Placement& placement,
                                 const ConsistencyReport& report, const std::string& caption,
                                 std::uint64_t edge_sample_seed = 0x706c6f74u);

/// Cluster graph drawn at the true member centroids: vertex size tracks
/// node count, color tracks kind, edge labels carry the annotations.
std::string render_cluster_graph_svg(const NetworkInstance& instance,
                                     const Clustering& clustering, const ClusterGraph& cg,
                                     const std::string& caption);

}  // namespace locfree
