#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "locfree/graph.hpp"
#include "locfree/types.hpp"

namespace locfree {

/// One street: a polyline centerline swept to the given width, populated
/// at `node_density` nodes per square meter.
struct StreetSegment {
    std::vector<Point2D> polyline;
    double width = 0.0;
    double node_density = 0.0;
};

/// Rectangle in which `anchor_count` of the generated nodes are promoted
/// to anchors.
struct AnchorRegion {
    Rect rect;
    std::uint32_t anchor_count = 0;
};

struct DeploymentSpec {
    std::vector<StreetSegment> segments;
    std::vector<AnchorRegion> anchor_regions;
    double comm_radius = 0.0;
    std::uint64_t seed = 0;
};

/// Ground truth: positions, anchor set and the unit-disk communication
/// graph at comm_radius.
struct NetworkInstance {
    std::vector<Point2D> positions;       // index = NodeId
    std::vector<NodeId> anchors;          // sorted
    double comm_radius = 0.0;
    CommGraph graph;

    std::size_t node_count() const { return positions.size(); }
    bool is_anchor(NodeId v) const;
    double mean_degree() const;
};

/// Per-edge noisy distance measurements; one value per unordered pair.
class RangingTable {
public:
    RangingTable() = default;
    RangingTable(std::unordered_map<std::uint64_t, double> measured, double noise_stddev_fraction)
        : measured_(std::move(measured)), noise_fraction_(noise_stddev_fraction) {}

    std::optional<double> measured(NodeId u, NodeId v) const {
        const auto it = measured_.find(pair_key(u, v));
        if (it == measured_.end()) return std::nullopt;
        return it->second;
    }
    double noise_stddev_fraction() const { return noise_fraction_; }
    std::size_t size() const { return measured_.size(); }

private:
    std::unordered_map<std::uint64_t, double> measured_;
    double noise_fraction_ = 0.0;
};

/// Throws std::invalid_argument on spec violations (empty spec, zero
/// expected nodes, infeasible anchor counts). Identical (spec, seed) pairs
/// produce bit-identical instances.
NetworkInstance generate_network(const DeploymentSpec& spec);

/// Edge {u,v} iff distance <= radius (closed disk), u != v.
CommGraph build_unit_disk_graph(const std::vector<Point2D>& positions, double radius);

/// measured = true_distance * max(0.01, 1 + N(0, noise_stddev_fraction)),
/// one independent stream per edge so results do not depend on iteration
/// order.
RangingTable measure_distances(const NetworkInstance& instance, double noise_stddev_fraction,
                               std::uint64_t seed);

}  // namespace locfree
