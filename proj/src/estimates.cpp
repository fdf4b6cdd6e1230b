#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <stdexcept>

#include "locfree/localization.hpp"

namespace locfree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double required_ranging(const RangingTable& ranging, NodeId a, NodeId b) {
    auto m = ranging.measured(a, b);
    if (!m) throw std::runtime_error("ranging table does not cover a graph edge");
    return *m;
}

}  // namespace

std::optional<Point2D> AnchorInfo::position_of(NodeId anchor) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), anchor);
    if (it == ids.end() || *it != anchor) return std::nullopt;
    return positions[static_cast<std::size_t>(it - ids.begin())];
}

AnchorInfo AnchorInfo::from_instance(const NetworkInstance& instance) {
    AnchorInfo info;
    info.ids = instance.anchors;  // already sorted
    info.positions.reserve(info.ids.size());
    for (NodeId a : info.ids) info.positions.push_back(instance.positions[a]);
    return info;
}

void DistanceEstimates::set(NodeId v, NodeId anchor, double dist) {
    auto& row = est_[v];
    auto it = std::lower_bound(row.begin(), row.end(), anchor,
                               [](const auto& e, NodeId a) { return e.first < a; });
    if (it != row.end() && it->first == anchor)
        it->second = dist;
    else
        row.insert(it, {anchor, dist});
}

std::optional<double> DistanceEstimates::get(NodeId v, NodeId anchor) const {
    const auto& row = est_[v];
    auto it = std::lower_bound(row.begin(), row.end(), anchor,
                               [](const auto& e, NodeId a) { return e.first < a; });
    if (it == row.end() || it->first != anchor) return std::nullopt;
    return it->second;
}

DistanceEstimates dv_hop(const CommGraph& graph, const AnchorInfo& anchors,
                         LocalityAudit* audit) {
    const std::size_t k = anchors.size();
    if (k < 2) throw std::invalid_argument("dv_hop: needs at least 2 anchors");

    std::vector<std::vector<std::uint32_t>> hops;
    hops.reserve(k);
    for (NodeId a : anchors.ids) hops.push_back(audited_hop_flood(graph, a, audit));

    // Each anchor averages true distance per hop over the other anchors its
    // flood reached. Undefined corrections (isolated anchors) inherit the
    // mean of the defined ones.
    std::vector<double> corr(k, std::numeric_limits<double>::quiet_NaN());
    double corr_sum = 0;
    std::size_t corr_n = 0;
    for (std::size_t i = 0; i < k; ++i) {
        double sum_dist = 0;
        std::uint64_t sum_hops = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            std::uint32_t h = hops[i][anchors.ids[j]];
            if (h == kUnreachableHops) continue;
            sum_dist += anchors.positions[i].distance(anchors.positions[j]);
            sum_hops += h;
        }
        if (sum_hops > 0) {
            corr[i] = sum_dist / static_cast<double>(sum_hops);
            corr_sum += corr[i];
            ++corr_n;
        }
    }
    const double corr_mean = corr_n ? corr_sum / static_cast<double>(corr_n)
                                    : std::numeric_limits<double>::quiet_NaN();

    DistanceEstimates est(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        std::size_t nearest = k;
        std::uint32_t best = kUnreachableHops;
        for (std::size_t i = 0; i < k; ++i) {
            if (hops[i][v] < best) {
                best = hops[i][v];
                nearest = i;
            }
        }
        if (nearest == k) continue;  // no anchor reaches v
        double c = corr[nearest];
        if (std::isnan(c)) c = corr_mean;
        if (std::isnan(c)) continue;  // no anchor pair is mutually reachable
        if (audit) ++audit->aggregate_reads;  // correction arrived by network flood
        for (std::size_t i = 0; i < k; ++i) {
            if (hops[i][v] == kUnreachableHops) continue;
            est.set(v, anchors.ids[i], static_cast<double>(hops[i][v]) * c);
        }
    }
    return est;
}

DistanceEstimates sum_dist(const CommGraph& graph, const RangingTable& ranging,
                           const std::vector<NodeId>& anchors, LocalityAudit* audit) {
    if (anchors.empty()) throw std::invalid_argument("sum_dist: needs at least 1 anchor");
    const std::size_t n = graph.node_count();
    DistanceEstimates est(n);
    std::vector<double> dist(n);
    std::vector<char> queued(n);

    std::vector<NodeId> sorted_anchors = anchors;
    std::sort(sorted_anchors.begin(), sorted_anchors.end());

    for (NodeId a : sorted_anchors) {
        if (a >= n) throw std::invalid_argument("sum_dist: anchor id out of range");
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(queued.begin(), queued.end(), 0);
        dist[a] = 0;
        std::deque<NodeId> queue{a};
        queued[a] = 1;
        // Monotone-improvement flood: a node rebroadcasts whenever its best
        // known path cost drops. Positive weights guarantee termination and
        // shortest-path results.
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            queued[v] = 0;
            const double dv = dist[v];
            LocalView view(graph, v, audit);
            for (NodeId u : view.neighbors()) {
                view.note_ranging_access(v, u);
                double w = required_ranging(ranging, v, u);
                if (dv + w < dist[u]) {
                    dist[u] = dv + w;
                    view.note_state_access(u);
                    if (!queued[u]) {
                        queued[u] = 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        for (NodeId v = 0; v < n; ++v)
            if (dist[v] < kInf) est.set(v, a, dist[v]);
    }
    return est;
}

namespace {

/// Distance from v to the anchor in the local frame spanned by two
/// mutually-adjacent reference neighbors. Returns the same-side and
/// opposite-side readings, or nothing when the triangles are infeasible.
struct MirrorPair {
    double same;
    double opposite;
};

std::optional<MirrorPair> two_triangle_readings(double r_b, double r_c, double w, double e_b,
                                                double e_c) {
    if (w < 1e-9) return std::nullopt;
    const double xv = (r_b * r_b + w * w - r_c * r_c) / (2 * w);
    double y2v = r_b * r_b - xv * xv;
    const double xa = (e_b * e_b + w * w - e_c * e_c) / (2 * w);
    double y2a = e_b * e_b - xa * xa;
    // Mild negative slack tolerates ranging noise on almost-degenerate
    // triangles; anything worse is geometrically impossible.
    if (y2v < -0.1 * r_b * r_b || y2a < -0.1 * e_b * e_b) return std::nullopt;
    const double yv = std::sqrt(std::max(0.0, y2v));
    const double ya = std::sqrt(std::max(0.0, y2a));
    const double dx = xv - xa;
    return MirrorPair{std::hypot(dx, yv - ya), std::hypot(dx, yv + ya)};
}

}  // namespace

DistanceEstimates euclidean_propagation(const CommGraph& graph, const RangingTable& ranging,
                                        const AnchorInfo& anchors, LocalityAudit* audit) {
    if (anchors.size() < 1) throw std::invalid_argument("euclidean_propagation: needs anchors");
    const std::size_t n = graph.node_count();
    // Two independent reference pairs must agree this closely (relative) on
    // the propagated distance before it is accepted. Deliberately permissive:
    // occasional wrong-mirror agreements are expected and accumulate.
    constexpr double kAgreementRel = 0.25;
    constexpr std::size_t kMaxRefs = 6;

    DistanceEstimates est(n);
    std::vector<double> ev(n);
    std::vector<char> pending(n);

    for (std::size_t ai = 0; ai < anchors.size(); ++ai) {
        const NodeId a = anchors.ids[ai];
        std::fill(ev.begin(), ev.end(), -1.0);
        std::fill(pending.begin(), pending.end(), 0);
        std::deque<NodeId> queue;

        auto enqueue_unset_neighbors = [&](NodeId u) {
            for (NodeId w : graph.neighbors(u)) {
                if (ev[w] < 0 && !pending[w]) {
                    pending[w] = 1;
                    queue.push_back(w);
                }
            }
        };

        ev[a] = 0;
        for (std::size_t bj = 0; bj < anchors.size(); ++bj) {
            if (bj == ai) continue;
            ev[anchors.ids[bj]] = anchors.positions[ai].distance(anchors.positions[bj]);
            if (audit) ++audit->aggregate_reads;  // anchor coordinates arrive by flood
        }
        {
            LocalView view(graph, a, audit);
            for (NodeId u : view.neighbors()) {
                view.note_ranging_access(a, u);
                ev[u] = required_ranging(ranging, a, u);
            }
        }
        enqueue_unset_neighbors(a);
        for (NodeId b : anchors.ids)
            if (ev[b] >= 0) enqueue_unset_neighbors(b);
        for (NodeId u : graph.neighbors(a)) enqueue_unset_neighbors(u);

        struct Ref {
            NodeId u;
            double est;
            double range;
        };
        std::vector<Ref> refs;
        struct Candidate {
            std::uint32_t pair_id;
            double value;
        };
        std::vector<Candidate> cands;

        while (!queue.empty()) {
            const NodeId v = queue.front();
            queue.pop_front();
            pending[v] = 0;
            if (ev[v] >= 0) continue;

            LocalView view(graph, v, audit);
            refs.clear();
            for (NodeId u : view.neighbors()) {
                if (ev[u] < 0) continue;
                view.note_state_access(u);
                view.note_ranging_access(v, u);
                refs.push_back({u, ev[u], required_ranging(ranging, v, u)});
                if (refs.size() == kMaxRefs) break;
            }
            if (refs.size() < 2) continue;

            cands.clear();
            std::uint32_t pair_id = 0;
            for (std::size_t i = 0; i < refs.size(); ++i) {
                for (std::size_t j = i + 1; j < refs.size(); ++j, ++pair_id) {
                    if (!graph.has_edge(refs[i].u, refs[j].u)) continue;
                    view.note_ranging_access(refs[i].u, refs[j].u);
                    auto m = ranging.measured(refs[i].u, refs[j].u);
                    if (!m) continue;
                    auto mp = two_triangle_readings(refs[i].range, refs[j].range, *m, refs[i].est,
                                                    refs[j].est);
                    if (!mp) continue;
                    cands.push_back({pair_id, mp->same});
                    cands.push_back({pair_id, mp->opposite});
                }
            }
            if (cands.size() < 3) continue;  // need candidates from 2+ pairs

            double best_gap = kInf, best_val = -1;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                for (std::size_t j = i + 1; j < cands.size(); ++j) {
                    if (cands[i].pair_id == cands[j].pair_id) continue;
                    double hi = std::max({cands[i].value, cands[j].value, 1e-9});
                    double gap = std::abs(cands[i].value - cands[j].value) / hi;
                    if (gap < best_gap) {
                        best_gap = gap;
                        best_val = (cands[i].value + cands[j].value) / 2;
                    }
                }
            }
            if (best_gap <= kAgreementRel && best_val > 1e-12) {
                ev[v] = best_val;
                enqueue_unset_neighbors(v);
            }
        }

        for (NodeId v = 0; v < n; ++v)
            if (ev[v] >= 0 && (ev[v] > 0 || v == a)) est.set(v, a, ev[v]);
    }
    return est;
}

}  // namespace locfree
