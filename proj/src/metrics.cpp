#include "locfree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locfree/spatial_grid.hpp"

namespace locfree {

std::vector<C1Violation> check_c1(const Placement& placement, const CommGraph& graph,
                                  double max_dist, std::size_t* skipped_edges) {
    if (placement.coords.size() != graph.node_count())
        throw std::invalid_argument("check_c1: placement size does not match graph");
    std::vector<C1Violation> out;
    std::size_t skipped = 0;
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            if (!placement.coords[u] || !placement.coords[v]) {
                ++skipped;
                continue;
            }
            double d = placement.coords[u]->distance(*placement.coords[v]);
            if (d > max_dist) out.push_back({u, v, d});
        }
    }
    if (skipped_edges) *skipped_edges = skipped;
    return out;
}

std::vector<C2Violation> check_c2(const Placement& placement, const CommGraph& graph,
                                  double min_dist) {
    if (placement.coords.size() != graph.node_count())
        throw std::invalid_argument("check_c2: placement size does not match graph");
    if (min_dist <= 0) return {};
    SpatialGrid grid(min_dist);
    for (NodeId v = 0; v < placement.coords.size(); ++v)
        if (placement.coords[v]) grid.insert(v, *placement.coords[v]);
    std::vector<C2Violation> out;
    // the grid reports the closed ball; the violation itself is strict
    grid.for_each_pair_within(min_dist, [&](NodeId a, NodeId b, double d) {
        if (d < min_dist && !graph.has_edge(a, b)) out.push_back({a, b, d});
    });
    std::sort(out.begin(), out.end(),
              [](const C2Violation& x, const C2Violation& y) {
                  return x.a != y.a ? x.a < y.a : x.b < y.b;
              });
    return out;
}

std::vector<FoldPair> detect_folds(const Placement& placement, const NetworkInstance& instance,
                                   double far_factor, double near_factor) {
    if (placement.coords.size() != instance.node_count())
        throw std::invalid_argument("detect_folds: placement size does not match instance");
    const double near_dist = near_factor * instance.comm_radius;
    const double far_dist = far_factor * instance.comm_radius;
    if (near_dist <= 0) return {};
    SpatialGrid grid(near_dist);
    for (NodeId v = 0; v < placement.coords.size(); ++v)
        if (placement.coords[v]) grid.insert(v, *placement.coords[v]);
    std::vector<FoldPair> out;
    // closed-ball grid query, strict distance tests for the pair itself
    grid.for_each_pair_within(near_dist, [&](NodeId a, NodeId b, double d) {
        if (d >= near_dist) return;
        double td = instance.positions[a].distance(instance.positions[b]);
        if (td > far_dist) out.push_back({a, b, td, d});
    });
    std::sort(out.begin(), out.end(), [](const FoldPair& x, const FoldPair& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return out;
}

AlignResult align(const Placement& placement, const std::vector<Point2D>& truth,
                  bool allow_reflection, bool allow_scale) {
    if (placement.coords.size() != truth.size())
        throw std::invalid_argument("align: truth size does not match placement");
    std::vector<NodeId> common;
    for (NodeId v = 0; v < placement.coords.size(); ++v)
        if (placement.coords[v]) common.push_back(v);
    if (common.size() < 3)
        throw std::invalid_argument("align: fewer than 3 positioned nodes");

    double pcx = 0, pcy = 0, qcx = 0, qcy = 0;
    for (NodeId v : common) {
        pcx += placement.coords[v]->x;
        pcy += placement.coords[v]->y;
        qcx += truth[v].x;
        qcy += truth[v].y;
    }
    const double n = static_cast<double>(common.size());
    pcx /= n; pcy /= n; qcx /= n; qcy /= n;

    // Closed-form 2D orthogonal Procrustes on centered coordinates. The
    // reflected branch mirrors the source across the x axis first; the
    // branch with the lower squared error wins.
    auto fit = [&](bool reflect) {
        double a = 0, b = 0, pp = 0;
        for (NodeId v : common) {
            double px = placement.coords[v]->x - pcx;
            double py = placement.coords[v]->y - pcy;
            if (reflect) py = -py;
            double qx = truth[v].x - qcx;
            double qy = truth[v].y - qcy;
            a += px * qx + py * qy;
            b += px * qy - py * qx;
            pp += px * px + py * py;
        }
        double theta = std::atan2(b, a);
        double s = 1.0;
        if (allow_scale && pp > 0) s = std::sqrt(a * a + b * b) / pp;
        double c = std::cos(theta), si = std::sin(theta);
        double sse = 0;
        for (NodeId v : common) {
            double px = placement.coords[v]->x - pcx;
            double py = placement.coords[v]->y - pcy;
            if (reflect) py = -py;
            double rx = s * (c * px - si * py);
            double ry = s * (si * px + c * py);
            double dx = rx - (truth[v].x - qcx);
            double dy = ry - (truth[v].y - qcy);
            sse += dx * dx + dy * dy;
        }
        return std::tuple<double, double, double>(sse, theta, s);
    };

    auto [sse0, theta0, s0] = fit(false);
    double sse = sse0, theta = theta0, s = s0;
    bool reflected = false;
    if (allow_reflection) {
        auto [sse1, theta1, s1] = fit(true);
        if (sse1 < sse0) {
            sse = sse1;
            theta = theta1;
            s = s1;
            reflected = true;
        }
    }

    AlignResult result;
    result.transform.rotation = theta;
    result.transform.reflected = reflected;
    result.transform.scale = s;
    // Near-collinear or near-coincident sources make the fit unreliable:
    // flag when the spread along the minor axis is a sliver of the major.
    {
        double sxx = 0, syy = 0, sxy = 0;
        for (NodeId v : common) {
            double px = placement.coords[v]->x - pcx;
            double py = placement.coords[v]->y - pcy;
            sxx += px * px;
            syy += py * py;
            sxy += px * py;
        }
        double tr = sxx + syy;
        double det = sxx * syy - sxy * sxy;
        double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
        double lmin = tr / 2 - disc, lmax = tr / 2 + disc;
        result.transform.low_confidence = !(lmax > 0) || lmin < 1e-9 * lmax;
    }

    const double c = std::cos(theta), si = std::sin(theta);
    result.transform.tx = qcx - s * (c * (pcx) - si * (reflected ? -pcy : pcy));
    result.transform.ty = qcy - s * (si * (pcx) + c * (reflected ? -pcy : pcy));

    result.aligned.frame = Frame::global;
    result.aligned.coords.resize(placement.coords.size());
    for (NodeId v = 0; v < placement.coords.size(); ++v) {
        if (!placement.coords[v]) continue;
        double px = placement.coords[v]->x - pcx;
        double py = placement.coords[v]->y - pcy;
        if (reflected) py = -py;
        double rx = s * (c * px - si * py) + qcx;
        double ry = s * (si * px + c * py) + qcy;
        result.aligned.coords[v] = Point2D{rx, ry};
    }
    result.rms = std::sqrt(sse / n);
    return result;
}

double placement_stress(const Placement& placement, const CommGraph& graph,
                        const RangingTable& ranging) {
    double sum = 0;
    std::size_t count = 0;
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            if (!placement.coords[u] || !placement.coords[v]) continue;
            auto m = ranging.measured(u, v);
            if (!m) continue;
            double d = placement.coords[u]->distance(*placement.coords[v]);
            double r = d - *m;
            sum += r * r;
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

ConsistencyReport evaluate_placement(const Placement& placement, const NetworkInstance& instance,
                                     const MetricsParams& params) {
    if (placement.coords.size() != instance.node_count())
        throw std::invalid_argument("evaluate_placement: placement size does not match instance");

    ConsistencyReport report;
    report.positioned = placement.positioned_count();
    report.unpositioned = instance.node_count() - report.positioned;

    const Placement* eval = &placement;
    Placement aligned_storage;
    if (placement.frame == Frame::virtual_frame) {
        if (report.positioned < 3) {
            report.rms_error = 0;
            return report;  // nothing meaningful to measure
        }
        AlignResult ar = align(placement, instance.positions, true, true);
        aligned_storage = std::move(ar.aligned);
        report.applied_alignment = ar.transform;
        report.rms_error = ar.rms;
        eval = &aligned_storage;
    } else {
        double sse = 0;
        for (NodeId v = 0; v < placement.coords.size(); ++v) {
            if (!placement.coords[v]) continue;
            sse += placement.coords[v]->squared_distance(instance.positions[v]);
        }
        report.rms_error =
            report.positioned ? std::sqrt(sse / static_cast<double>(report.positioned)) : 0.0;
    }

    const double r = instance.comm_radius;
    report.c1_violations =
        check_c1(*eval, instance.graph, params.c1_max_dist_factor * r, &report.c1_skipped_edges);
    report.c2_violations = check_c2(*eval, instance.graph, params.c2_min_dist_factor * r);
    report.fold_pairs =
        detect_folds(*eval, instance, params.fold_far_factor, params.fold_near_factor);
    return report;
}

RegionAggregate region_aggregate(const Placement& placement, const NetworkInstance& instance,
                                 const Rect& region, const std::vector<double>& node_values,
                                 double threshold) {
    if (region.x1 <= region.x0 || region.y1 <= region.y0)
        throw std::invalid_argument("region_aggregate: empty region");
    if (node_values.size() != instance.node_count())
        throw std::invalid_argument("region_aggregate: node_values size mismatch");
    if (placement.coords.size() != instance.node_count())
        throw std::invalid_argument("region_aggregate: placement size mismatch");

    RegionAggregate out;
    double sum_p = 0, sum_t = 0;
    for (NodeId v = 0; v < instance.node_count(); ++v) {
        if (placement.coords[v] && region.contains(*placement.coords[v])) {
            sum_p += node_values[v];
            ++out.members_by_placement;
        }
        if (region.contains(instance.positions[v])) {
            sum_t += node_values[v];
            ++out.members_by_truth;
        }
    }
    if (out.members_by_placement) {
        out.mean_by_placement = sum_p / static_cast<double>(out.members_by_placement);
        out.alarm_by_placement = *out.mean_by_placement > threshold;
    }
    if (out.members_by_truth) {
        out.mean_by_truth = sum_t / static_cast<double>(out.members_by_truth);
        out.alarm_by_truth = *out.mean_by_truth > threshold;
    }
    return out;
}

}  // namespace locfree
