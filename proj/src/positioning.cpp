#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "locfree/localization.hpp"
#include "locfree/metrics.hpp"
#include "locfree/rng.hpp"

namespace locfree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConditionLimit = 1e8;

struct RefPoint {
    Point2D p;
    double d;
};

/// Linearized circle-intersection least squares. The last reference's
/// equation is subtracted from the others; the 2x2 normal equations are
/// rejected when singular or with condition number above cond_limit.
std::optional<Point2D> solve_lateration(const std::vector<RefPoint>& refs, double cond_limit) {
    const std::size_t k = refs.size();
    if (k < 3) return std::nullopt;
    const RefPoint& last = refs[k - 1];
    double m00 = 0, m01 = 0, m11 = 0, b0 = 0, b1 = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double a0 = 2 * (refs[i].p.x - last.p.x);
        const double a1 = 2 * (refs[i].p.y - last.p.y);
        const double rhs = last.d * last.d - refs[i].d * refs[i].d + refs[i].p.x * refs[i].p.x -
                           last.p.x * last.p.x + refs[i].p.y * refs[i].p.y -
                           last.p.y * last.p.y;
        m00 += a0 * a0;
        m01 += a0 * a1;
        m11 += a1 * a1;
        b0 += a0 * rhs;
        b1 += a1 * rhs;
    }
    const double tr = m00 + m11;
    const double det = m00 * m11 - m01 * m01;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    const double lmin = tr / 2 - disc;
    const double lmax = tr / 2 + disc;
    if (!(lmin > 0) || lmax > cond_limit * lmin) return std::nullopt;
    return Point2D{(b0 * m11 - b1 * m01) / det, (m00 * b1 - m01 * b0) / det};
}

std::vector<char> anchor_bitmap(std::size_t n, const std::vector<NodeId>& ids) {
    std::vector<char> is_anchor(n, 0);
    for (NodeId a : ids) {
        if (a >= n) throw std::invalid_argument("anchor id out of range");
        is_anchor[a] = 1;
    }
    return is_anchor;
}

}  // namespace

Placement lateration(const DistanceEstimates& est, const AnchorInfo& anchors, int min_anchors,
                     LaterationStats* stats, LocalityAudit* audit) {
    const std::size_t n = est.node_count();
    Placement out;
    out.frame = Frame::global;
    out.coords.resize(n);
    auto is_anchor = anchor_bitmap(n, anchors.ids);
    for (std::size_t i = 0; i < anchors.size(); ++i) out.coords[anchors.ids[i]] = anchors.positions[i];

    const std::size_t need = static_cast<std::size_t>(std::max(min_anchors, 3));
    std::vector<RefPoint> refs;
    for (NodeId v = 0; v < n; ++v) {
        if (is_anchor[v]) continue;
        auto cands = est.for_node(v);
        if (cands.size() < need) {
            if (stats) ++stats->underdetermined;
            continue;
        }
        refs.clear();
        for (const auto& [aid, d] : cands) {
            auto p = anchors.position_of(aid);
            if (!p) throw std::invalid_argument("lateration: estimate to unknown anchor");
            refs.push_back({*p, d});
        }
        if (audit) ++audit->aggregate_reads;  // anchor coordinates arrive by flood
        auto sol = solve_lateration(refs, kConditionLimit);
        if (sol)
            out.coords[v] = *sol;
        else if (stats)
            ++stats->condition_rejections;
    }
    return out;
}

Placement min_max_box(const DistanceEstimates& est, const AnchorInfo& anchors, int min_anchors,
                      LocalityAudit* audit) {
    const std::size_t n = est.node_count();
    Placement out;
    out.frame = Frame::global;
    out.coords.resize(n);
    auto is_anchor = anchor_bitmap(n, anchors.ids);
    for (std::size_t i = 0; i < anchors.size(); ++i) out.coords[anchors.ids[i]] = anchors.positions[i];

    const std::size_t need = static_cast<std::size_t>(std::max(min_anchors, 1));
    for (NodeId v = 0; v < n; ++v) {
        if (is_anchor[v]) continue;
        auto cands = est.for_node(v);
        if (cands.size() < need) continue;
        double lo_x = -kInf, hi_x = kInf, lo_y = -kInf, hi_y = kInf;
        for (const auto& [aid, d] : cands) {
            auto p = anchors.position_of(aid);
            if (!p) throw std::invalid_argument("min_max_box: estimate to unknown anchor");
            lo_x = std::max(lo_x, p->x - d);
            hi_x = std::min(hi_x, p->x + d);
            lo_y = std::max(lo_y, p->y - d);
            hi_y = std::min(hi_y, p->y + d);
        }
        if (audit) ++audit->aggregate_reads;
        // The clipped rectangle may be inverted when estimates disagree; its
        // center is still the best guess this method offers.
        out.coords[v] = Point2D{(lo_x + hi_x) / 2, (lo_y + hi_y) / 2};
    }
    return out;
}

Placement iterative_lateration_refine(const Placement& start, const CommGraph& graph,
                                      const RangingTable& ranging,
                                      const std::vector<NodeId>& pinned, int rounds, double tol,
                                      LocalityAudit* audit) {
    const std::size_t n = graph.node_count();
    if (start.coords.size() != n)
        throw std::invalid_argument("refine: placement size does not match graph");
    auto is_pinned = anchor_bitmap(n, pinned);

    Placement cur = start;
    Placement best = start;
    double best_stress = placement_stress(start, graph, ranging);

    std::vector<RefPoint> refs;
    for (int round = 0; round < rounds; ++round) {
        Placement next = cur;
        double max_disp = 0;
        for (NodeId v = 0; v < n; ++v) {
            if (is_pinned[v]) continue;
            LocalView view(graph, v, audit);
            refs.clear();
            for (NodeId u : view.neighbors()) {
                if (!cur.coords[u]) continue;
                view.note_state_access(u);
                auto m = ranging.measured(u, v);
                if (!m) continue;
                view.note_ranging_access(u, v);
                refs.push_back({*cur.coords[u], *m});
            }
            if (refs.size() < 3) continue;
            auto sol = solve_lateration(refs, kConditionLimit);
            if (!sol) continue;
            if (cur.coords[v])
                max_disp = std::max(max_disp, sol->distance(*cur.coords[v]));
            else
                max_disp = kInf;  // newly positioned, keep iterating
            next.coords[v] = *sol;
        }
        cur = std::move(next);
        double s = placement_stress(cur, graph, ranging);
        if (s < best_stress) {
            best_stress = s;
            best = cur;
        }
        if (max_disp < tol) break;
    }
    return best;
}

Placement spring_embedder(const Placement& start, const CommGraph& graph,
                          const RangingTable& ranging, const SpringParams& params,
                          const std::vector<NodeId>& pinned, LocalityAudit* audit) {
    const std::size_t n = graph.node_count();
    if (start.coords.size() != n)
        throw std::invalid_argument("spring_embedder: placement size does not match graph");
    for (NodeId v = 0; v < n; ++v)
        if (!start.coords[v])
            throw std::invalid_argument("spring_embedder: all nodes must be positioned");
    auto is_pinned = anchor_bitmap(n, pinned);

    Placement cur = start;
    Placement best = start;
    double best_stress = placement_stress(start, graph, ranging);
    double step = params.step;

    std::vector<Point2D> force(n);
    for (int round = 0; round < params.rounds; ++round) {
        for (NodeId v = 0; v < n; ++v) {
            force[v] = {0, 0};
            if (is_pinned[v]) continue;
            LocalView view(graph, v, audit);
            const Point2D pv = *cur.coords[v];
            for (NodeId u : view.neighbors()) {
                view.note_state_access(u);
                auto m = ranging.measured(u, v);
                if (!m) continue;
                view.note_ranging_access(u, v);
                const Point2D pu = *cur.coords[u];
                double dx = pv.x - pu.x, dy = pv.y - pu.y;
                double d = std::hypot(dx, dy);
                double ux, uy;
                if (d < 1e-12) {
                    // Coincident points get a deterministic push direction.
                    double angle = 2 * 3.14159265358979323846 *
                                   (static_cast<double>(mix_seed(v, u)) * 0x1.0p-64);
                    ux = std::cos(angle);
                    uy = std::sin(angle);
                    d = 0;
                } else {
                    ux = dx / d;
                    uy = dy / d;
                }
                const double residual = *m - d;  // positive pushes away from u
                force[v].x += residual * ux;
                force[v].y += residual * uy;
            }
        }
        for (NodeId v = 0; v < n; ++v) {
            if (is_pinned[v]) continue;
            const double deg = std::max<std::size_t>(graph.degree(v), 1);
            cur.coords[v]->x += step * force[v].x / deg;
            cur.coords[v]->y += step * force[v].y / deg;
        }
        step *= params.decay;
        double s = placement_stress(cur, graph, ranging);
        if (s < best_stress) {
            best_stress = s;
            best = cur;
        }
    }
    return best;
}

namespace {

NodeId farthest_node(const std::vector<std::uint32_t>& hops) {
    NodeId best = 0;
    std::uint32_t best_h = 0;
    for (NodeId v = 0; v < hops.size(); ++v) {
        if (hops[v] == kUnreachableHops) continue;
        if (hops[v] > best_h) {
            best_h = hops[v];
            best = v;
        }
    }
    return best;
}

NodeId farthest_in_set(const std::vector<std::uint32_t>& hops, const std::vector<NodeId>& set) {
    NodeId best = set.front();
    std::uint32_t best_h = 0;
    for (NodeId v : set) {
        if (hops[v] == kUnreachableHops) continue;
        if (hops[v] > best_h) {
            best_h = hops[v];
            best = v;
        }
    }
    return best;
}

}  // namespace

Placement afl_bootstrap(const CommGraph& graph, const RangingTable& ranging,
                        LocalityAudit* audit) {
    const std::size_t n = graph.node_count();
    if (n < 4) throw std::invalid_argument("afl_bootstrap: needs at least 4 nodes");
    if (!is_connected(graph)) throw std::invalid_argument("afl_bootstrap: graph must be connected");

    // Two gateway floods pick an approximate diameter pair; the equator
    // (nodes with near-equal distance to both ends) hosts the second,
    // roughly perpendicular pair.
    auto h_seed = bfs_hops(graph, NodeId{0});
    const NodeId n1 = farthest_node(h_seed);
    auto h1 = audited_hop_flood(graph, n1, audit);
    const NodeId n2 = farthest_node(h1);
    auto h2 = audited_hop_flood(graph, n2, audit);

    std::vector<NodeId> equator;
    for (NodeId v = 0; v < n; ++v) {
        if (h1[v] == kUnreachableHops || h2[v] == kUnreachableHops) continue;
        const std::int64_t d = static_cast<std::int64_t>(h1[v]) - static_cast<std::int64_t>(h2[v]);
        if (d >= -1 && d <= 1) equator.push_back(v);
    }
    if (equator.empty()) throw std::invalid_argument("afl_bootstrap: empty equator");

    auto h_eq = audited_hop_flood(graph, equator.front(), audit);
    const NodeId n3 = farthest_in_set(h_eq, equator);
    auto h3 = audited_hop_flood(graph, n3, audit);
    const NodeId n4 = farthest_in_set(h3, equator);
    auto h4 = audited_hop_flood(graph, n4, audit);

    double edge_sum = 0;
    std::size_t edge_n = 0;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            auto m = ranging.measured(u, v);
            if (!m) continue;
            edge_sum += *m;
            ++edge_n;
        }
    }
    if (audit) ++audit->aggregate_reads;  // mean hop length is a network aggregate
    const double hop_len = edge_n ? edge_sum / static_cast<double>(edge_n) : 1.0;

    Placement out;
    out.frame = Frame::virtual_frame;
    out.coords.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        const double x = 0.5 * (static_cast<double>(h1[v]) - static_cast<double>(h2[v]));
        const double y = 0.5 * (static_cast<double>(h3[v]) - static_cast<double>(h4[v]));
        out.coords[v] = Point2D{x * hop_len, y * hop_len};
    }
    return out;
}

PipelineConfig pipeline_config_for(PipelineName name) {
    PipelineConfig c;
    switch (name) {
        case PipelineName::adhoc_positioning:
            c.phase1 = Phase1::euclidean;
            c.phase2 = Phase2::lateration;
            c.phase3 = Phase3::none;
            break;
        case PipelineName::robust_positioning:
            c.phase1 = Phase1::dv_hop;
            c.phase2 = Phase2::lateration;
            c.phase3 = Phase3::iterative_lateration;
            break;
        case PipelineName::nhop_multilateration:
            c.phase1 = Phase1::sum_dist;
            c.phase2 = Phase2::min_max;
            c.phase3 = Phase3::iterative_lateration;
            break;
        case PipelineName::afl:
            // Phase slots unused: afl runs bootstrap + spring.
            c.phase3 = Phase3::spring;
            break;
    }
    return c;
}

Placement run_phases(const PipelineConfig& config, const NetworkInstance& instance,
                     const RangingTable& ranging, LocalityAudit* audit) {
    AnchorInfo anchors = AnchorInfo::from_instance(instance);
    DistanceEstimates est;
    switch (config.phase1) {
        case Phase1::dv_hop:
            est = dv_hop(instance.graph, anchors, audit);
            break;
        case Phase1::sum_dist:
            est = sum_dist(instance.graph, ranging, anchors.ids, audit);
            break;
        case Phase1::euclidean:
            est = euclidean_propagation(instance.graph, ranging, anchors, audit);
            break;
    }

    Placement placement;
    switch (config.phase2) {
        case Phase2::lateration:
            placement = lateration(est, anchors, config.min_anchors_for_fix, nullptr, audit);
            break;
        case Phase2::min_max:
            placement = min_max_box(est, anchors, config.min_anchors_for_fix, audit);
            break;
    }

    const double tol = config.convergence_tol < 0 ? 1e-3 * instance.comm_radius
                                                  : config.convergence_tol;
    switch (config.phase3) {
        case Phase3::none:
            break;
        case Phase3::iterative_lateration:
            placement = iterative_lateration_refine(placement, instance.graph, ranging,
                                                    anchors.ids, config.refinement_rounds, tol,
                                                    audit);
            break;
        case Phase3::spring:
            placement = spring_embedder(placement, instance.graph, ranging, config.spring,
                                        anchors.ids, audit);
            break;
    }
    return placement;
}

Placement run_pipeline(PipelineName name, const NetworkInstance& instance,
                       const RangingTable& ranging, const PipelineConfig& config,
                       LocalityAudit* audit) {
    if (name == PipelineName::afl) {
        Placement start = afl_bootstrap(instance.graph, ranging, audit);
        return spring_embedder(start, instance.graph, ranging, config.spring, {}, audit);
    }
    PipelineConfig c = config;
    const PipelineConfig canonical = pipeline_config_for(name);
    c.phase1 = canonical.phase1;
    c.phase2 = canonical.phase2;
    c.phase3 = canonical.phase3;
    return run_phases(c, instance, ranging, audit);
}

const char* pipeline_name_string(PipelineName name) {
    switch (name) {
        case PipelineName::adhoc_positioning: return "adhoc_positioning";
        case PipelineName::robust_positioning: return "robust_positioning";
        case PipelineName::nhop_multilateration: return "nhop_multilateration";
        case PipelineName::afl: return "afl";
    }
    return "unknown";
}

std::optional<PipelineName> pipeline_name_from_string(std::string_view s) {
    if (s == "adhoc_positioning") return PipelineName::adhoc_positioning;
    if (s == "robust_positioning") return PipelineName::robust_positioning;
    if (s == "nhop_multilateration") return PipelineName::nhop_multilateration;
    if (s == "afl") return PipelineName::afl;
    return std::nullopt;
}

}  // namespace locfree
