#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace locfree {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

/// Ground-truth or placed position, meters.
struct Point2D {
    double x = 0.0;
    double y = 0.0;

    double distance(const Point2D& o) const {
        const double dx = x - o.x;
        const double dy = y - o.y;
        return std::sqrt(dx * dx + dy * dy);
    }
    double squared_distance(const Point2D& o) const {
        const double dx = x - o.x;
        const double dy = y - o.y;
        return dx * dx + dy * dy;
    }
};

inline double distance(const Point2D& a, const Point2D& b) { return a.distance(b); }
inline double squared_distance(const Point2D& a, const Point2D& b) {
    return a.squared_distance(b);
}

inline bool operator==(const Point2D& a, const Point2D& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Point2D& a, const Point2D& b) { return !(a == b); }

/// Axis-aligned rectangle, corners inclusive.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool contains(const Point2D& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

/// Canonical key for an unordered node pair.
inline std::uint64_t pair_key(NodeId u, NodeId v) {
    const NodeId lo = u < v ? u : v;
    const NodeId hi = u < v ? v : u;
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace locfree
