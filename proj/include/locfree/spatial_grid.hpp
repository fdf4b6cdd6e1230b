#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "locfree/types.hpp"

namespace locfree {

/// Uniform hash grid for radius queries over point sets. Cell side equals
/// the query radius, so candidate pairs come from the 3x3 cell block.
class SpatialGrid {
public:
    SpatialGrid(double cell_size) : cell_(cell_size > 0.0 ? cell_size : 1.0) {}

    void insert(NodeId id, const Point2D& p) {
        cells_[key(p)].push_back(id);
        points_.emplace_back(id, p);
    }

    /// Calls fn(u, v, dist) once per unordered pair with distance <=
    /// radius, u < v. radius must be <= cell size.
    template <typename Fn>
    void for_each_pair_within(double radius, Fn&& fn) const {
        const double r2 = radius * radius;
        for (const auto& [id, p] : points_) {
            const std::int64_t cx = coord(p.x);
            const std::int64_t cy = coord(p.y);
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    const auto it = cells_.find(pack(cx + dx, cy + dy));
                    if (it == cells_.end()) continue;
                    for (NodeId other : it->second) {
                        if (other <= id) continue;
                        const double d2 = squared_distance(p, point_of(other));
                        if (d2 <= r2) fn(id, other, std::sqrt(d2));
                    }
                }
            }
        }
    }

    /// Calls fn(v) for every stored point within radius of q (including
    /// exact hits).
    template <typename Fn>
    void for_each_near(const Point2D& q, double radius, Fn&& fn) const {
        const double r2 = radius * radius;
        const std::int64_t cx = coord(q.x);
        const std::int64_t cy = coord(q.y);
        const std::int64_t reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
        for (std::int64_t dy = -reach; dy <= reach; ++dy) {
            for (std::int64_t dx = -reach; dx <= reach; ++dx) {
                const auto it = cells_.find(pack(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (NodeId other : it->second)
                    if (squared_distance(q, point_of(other)) <= r2) fn(other);
            }
        }
    }

private:
    const Point2D& point_of(NodeId id) const {
        // Callers insert ids in increasing order, so points_ is sorted:
        // O(1) when ids are dense, binary search when sparse.
        if (id < points_.size() && points_[id].first == id) return points_[id].second;
        auto it = std::lower_bound(points_.begin(), points_.end(), id,
                                   [](const auto& e, NodeId x) { return e.first < x; });
        return it->second;
    }

    std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
    static std::uint64_t pack(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
               static_cast<std::uint32_t>(y);
    }
    std::uint64_t key(const Point2D& p) const { return pack(coord(p.x), coord(p.y)); }

    double cell_;
    std::unordered_map<std::uint64_t, std::vector<NodeId>> cells_;
    std::vector<std::pair<NodeId, Point2D>> points_;
};

}  // namespace locfree
