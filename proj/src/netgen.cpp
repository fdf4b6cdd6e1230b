#include "locfree/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locfree/rng.hpp"
#include "locfree/spatial_grid.hpp"

namespace locfree {

namespace {

// Relative floor keeping noisy measurements positive even at 30% stddev.
constexpr double kNoiseFactorFloor = 0.01;

struct SweptLeg {
    Point2D origin;      // start of centerline
    double ux, uy;       // unit vector along centerline
    double length;
    double width;
    double density;
};

std::vector<SweptLeg> collect_legs(const DeploymentSpec& spec) {
    std::vector<SweptLeg> legs;
    for (const auto& seg : spec.segments) {
        if (seg.width <= 0.0) throw std::invalid_argument("segment width must be > 0");
        if (seg.node_density < 0.0) throw std::invalid_argument("node density must be >= 0");
        if (seg.polyline.size() < 2)
            throw std::invalid_argument("segment polyline needs at least 2 points");
        for (std::size_t i = 0; i + 1 < seg.polyline.size(); ++i) {
            const Point2D a = seg.polyline[i];
            const Point2D b = seg.polyline[i + 1];
            const double len = distance(a, b);
            if (len <= 0.0) throw std::invalid_argument("degenerate polyline leg");
            legs.push_back({a, (b.x - a.x) / len, (b.y - a.y) / len, len, seg.width,
                            seg.node_density});
        }
    }
    return legs;
}

}  // namespace

bool NetworkInstance::is_anchor(NodeId v) const {
    return std::binary_search(anchors.begin(), anchors.end(), v);
}

double NetworkInstance::mean_degree() const {
    if (positions.empty()) return 0.0;
    return 2.0 * static_cast<double>(graph.edge_count()) / static_cast<double>(positions.size());
}

NetworkInstance generate_network(const DeploymentSpec& spec) {
    if (spec.segments.empty()) throw std::invalid_argument("deployment spec has no segments");
    if (spec.comm_radius <= 0.0) throw std::invalid_argument("comm_radius must be > 0");

    const auto legs = collect_legs(spec);
    Rng rng(mix_seed(spec.seed, 0x6e657467u));  // position stream

    std::vector<Point2D> positions;
    for (const auto& leg : legs) {
        const double expected = leg.density * leg.length * leg.width;
        const std::uint64_t count = rng.poisson(expected);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double along = rng.uniform(0.0, leg.length);
            const double across = rng.uniform(-leg.width / 2.0, leg.width / 2.0);
            positions.push_back({leg.origin.x + leg.ux * along - leg.uy * across,
                                 leg.origin.y + leg.uy * along + leg.ux * across});
        }
    }
    if (positions.empty()) throw std::invalid_argument("deployment spec generates no nodes");

    NetworkInstance instance;
    instance.positions = std::move(positions);
    instance.comm_radius = spec.comm_radius;
    instance.graph = build_unit_disk_graph(instance.positions, spec.comm_radius);

    Rng anchor_rng(mix_seed(spec.seed, 0x616e6372u));  // anchor stream
    std::vector<bool> taken(instance.positions.size(), false);
    for (const auto& region : spec.anchor_regions) {
        std::vector<NodeId> candidates;
        for (NodeId v = 0; v < instance.positions.size(); ++v)
            if (!taken[v] && region.rect.contains(instance.positions[v])) candidates.push_back(v);
        if (candidates.size() < region.anchor_count)
            throw std::invalid_argument("anchor region holds fewer nodes than requested anchors");
        // partial Fisher-Yates over the candidate list
        for (std::uint32_t i = 0; i < region.anchor_count; ++i) {
            const std::uint64_t j = i + anchor_rng.below(candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
            taken[candidates[i]] = true;
            instance.anchors.push_back(candidates[i]);
        }
    }
    std::sort(instance.anchors.begin(), instance.anchors.end());
    return instance;
}

CommGraph build_unit_disk_graph(const std::vector<Point2D>& positions, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be > 0");
    SpatialGrid grid(radius);
    for (NodeId v = 0; v < positions.size(); ++v) grid.insert(v, positions[v]);
    std::vector<std::pair<NodeId, NodeId>> edges;
    grid.for_each_pair_within(radius,
                              [&](NodeId u, NodeId v, double) { edges.emplace_back(u, v); });
    return CommGraph::from_edges(positions.size(), edges);
}

RangingTable measure_distances(const NetworkInstance& instance, double noise_stddev_fraction,
                               std::uint64_t seed) {
    if (noise_stddev_fraction < 0.0)
        throw std::invalid_argument("noise_stddev_fraction must be >= 0");
    std::unordered_map<std::uint64_t, double> measured;
    measured.reserve(instance.graph.edge_count());
    for (NodeId u = 0; u < instance.node_count(); ++u) {
        for (NodeId v : instance.graph.neighbors(u)) {
            if (v <= u) continue;
            const double true_dist = distance(instance.positions[u], instance.positions[v]);
            double factor = 1.0;
            if (noise_stddev_fraction > 0.0) {
                Rng edge_rng(mix_seed(seed, u, v));
                factor = 1.0 + noise_stddev_fraction * edge_rng.normal();
            }
            measured.emplace(pair_key(u, v), true_dist * std::max(kNoiseFactorFloor, factor));
        }
    }
    return RangingTable(std::move(measured), noise_stddev_fraction);
}

}  // namespace locfree
