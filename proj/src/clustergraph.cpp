#include "locfree/clustergraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace locfree {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);  // keep the smaller id as root
        parent[b] = a;
    }
};

}  // namespace

BoundaryInfo detect_boundary(const CommGraph& graph, const BoundaryParams& params,
                             LocalityAudit* audit) {
    const std::size_t n = graph.node_count();
    if (params.hop_horizon < 1) throw std::invalid_argument("detect_boundary: horizon must be >= 1");
    if (params.degree_fraction <= 0 || params.degree_fraction >= 1)
        throw std::invalid_argument("detect_boundary: degree_fraction must be in (0, 1)");

    // h rounds of neighbor-max flooding give every node the maximum degree
    // within its h-hop ball.
    std::vector<std::uint32_t> cur(n), next(n);
    for (NodeId v = 0; v < n; ++v) cur[v] = static_cast<std::uint32_t>(graph.degree(v));
    for (int round = 0; round < params.hop_horizon; ++round) {
        for (NodeId v = 0; v < n; ++v) {
            LocalView view(graph, v, audit);
            std::uint32_t m = cur[v];
            for (NodeId u : view.neighbors()) {
                view.note_state_access(u);
                m = std::max(m, cur[u]);
            }
            next[v] = m;
        }
        std::swap(cur, next);
    }

    BoundaryInfo info;
    info.is_boundary.assign(n, false);
    for (NodeId v = 0; v < n; ++v)
        info.is_boundary[v] =
            static_cast<double>(graph.degree(v)) < params.degree_fraction * cur[v];

    // Strips: connected components of the boundary-induced subgraph, found
    // by min-label propagation (each round is one neighbor exchange).
    std::vector<NodeId> label(n, kInvalidNode);
    for (NodeId v = 0; v < n; ++v)
        if (info.is_boundary[v]) label[v] = v;
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId v = 0; v < n; ++v) {
            if (!info.is_boundary[v]) continue;
            LocalView view(graph, v, audit);
            for (NodeId u : view.neighbors()) {
                if (!info.is_boundary[u]) continue;
                view.note_state_access(u);
                if (label[u] < label[v]) {
                    label[v] = label[u];
                    changed = true;
                }
            }
        }
    }
    std::map<NodeId, std::vector<NodeId>> by_label;
    for (NodeId v = 0; v < n; ++v)
        if (info.is_boundary[v]) by_label[label[v]].push_back(v);
    info.strips.reserve(by_label.size());
    for (auto& [l, members] : by_label) info.strips.push_back(std::move(members));
    return info;
}

namespace {

/// Disseminates each boundary node's flag h hops out, hop by hop. Returns
/// per node the boundary nodes within the horizon (sorted by id) together
/// with their hop distance.
std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> boundary_within_horizon(
    const CommGraph& graph, const std::vector<bool>& is_boundary, int horizon,
    LocalityAudit* audit) {
    const std::size_t n = graph.node_count();
    std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> received(n);
    std::vector<std::uint32_t> depth(n, kUnreachableHops);
    std::vector<NodeId> touched;
    for (NodeId b = 0; b < n; ++b) {
        if (!is_boundary[b]) continue;
        // BFS limited to `horizon` hops; each expansion is a one-hop message.
        touched.clear();
        depth[b] = 0;
        touched.push_back(b);
        received[b].emplace_back(b, 0u);
        std::deque<NodeId> queue{b};
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            if (depth[v] == static_cast<std::uint32_t>(horizon)) continue;
            LocalView view(graph, v, audit);
            for (NodeId u : view.neighbors()) {
                view.note_state_access(u);
                if (depth[u] != kUnreachableHops) continue;
                depth[u] = depth[v] + 1;
                touched.push_back(u);
                received[u].emplace_back(b, depth[u]);
                queue.push_back(u);
            }
        }
        for (NodeId v : touched) depth[v] = kUnreachableHops;
    }
    return received;  // boundary ids appended in ascending order, so sorted
}

/// Connected components among `members` (graph-induced), counting only
/// components with at least two nodes so single stray flags don't register
/// as a wall.
int count_sides(const CommGraph& graph, const std::vector<NodeId>& members) {
    if (members.empty()) return 0;
    UnionFind uf(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (NodeId u : graph.neighbors(members[i])) {
            auto it = std::lower_bound(members.begin(), members.end(), u);
            if (it != members.end() && *it == u)
                uf.unite(static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(it - members.begin()));
        }
    }
    std::vector<std::uint32_t> size(members.size(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) ++size[uf.find(static_cast<std::uint32_t>(i))];
    int sides = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (uf.parent[i] == i && size[i] >= 2) ++sides;
    return sides;
}

}  // namespace

Clustering build_clusters(const CommGraph& graph, const BoundaryInfo& boundary,
                          const ClusterParams& params, LocalityAudit* audit) {
    const std::size_t n = graph.node_count();
    if (boundary.is_boundary.size() != n)
        throw std::invalid_argument("build_clusters: boundary info does not match graph");

    Clustering out;
    out.assignment.assign(n, kInvalidNode);
    if (n == 0) return out;

    // Side counting: each node inspects the boundary flags (and the
    // adjacency among flagged nodes, which travels with the flags) inside
    // its ball. The count is swept over every ball radius up to the horizon
    // and the maximum kept: a plaza center may see only the two nearest
    // corner arcs at short reach (which would read as a corridor), while at
    // full reach the remaining corners come into view.
    auto local_boundary =
        boundary_within_horizon(graph, boundary.is_boundary, params.side_horizon, audit);
    std::vector<int> side_count(n);
    const int sweep_lo = std::min(2, params.side_horizon);
    std::vector<NodeId> members;
    for (NodeId v = 0; v < n; ++v) {
        int best = 0;
        for (int h = sweep_lo; h <= params.side_horizon; ++h) {
            members.clear();
            for (const auto& [b, d] : local_boundary[v])
                if (d <= static_cast<std::uint32_t>(h)) members.push_back(b);
            best = std::max(best, count_sides(graph, members));
        }
        side_count[v] = best;
    }

    enum Core : char { none = 0, street = 1, intersection = 2 };
    std::vector<char> core(n, none);
    for (NodeId v = 0; v < n; ++v) {
        if (side_count[v] == 2) core[v] = street;
        else if (side_count[v] >= 3) core[v] = intersection;
    }

    // Preliminary clusters: components of equal-kind core nodes.
    UnionFind uf(n);
    for (NodeId u = 0; u < n; ++u) {
        if (core[u] == none) continue;
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            if (core[v] == core[u]) uf.unite(u, v);
        }
    }
    std::vector<ClusterId> cluster_of(n, kInvalidNode);
    std::vector<ClusterKind> kinds;
    {
        std::unordered_map<std::uint32_t, ClusterId> root_to_cluster;
        for (NodeId v = 0; v < n; ++v) {
            if (core[v] == none) continue;
            std::uint32_t r = uf.find(v);
            auto it = root_to_cluster.find(r);
            if (it == root_to_cluster.end()) {
                it = root_to_cluster.emplace(r, static_cast<ClusterId>(kinds.size())).first;
                kinds.push_back(core[r] == street ? ClusterKind::street : ClusterKind::intersection);
            }
            cluster_of[v] = it->second;
        }
    }

    // Synchronized adoption: unassigned nodes join the adjacent cluster
    // with the most members next to them (tie: lowest cluster id), reading
    // only the previous round's assignments.
    {
        bool progress = true;
        while (progress) {
            progress = false;
            std::vector<std::pair<NodeId, ClusterId>> adoptions;
            for (NodeId v = 0; v < n; ++v) {
                if (cluster_of[v] != kInvalidNode) continue;
                LocalView view(graph, v, audit);
                std::map<ClusterId, int> contact;
                for (NodeId u : view.neighbors()) {
                    view.note_state_access(u);
                    if (cluster_of[u] != kInvalidNode) ++contact[cluster_of[u]];
                }
                if (contact.empty()) continue;
                ClusterId best = contact.begin()->first;
                int best_n = contact.begin()->second;
                for (const auto& [c, cnt] : contact) {
                    if (cnt > best_n) {
                        best = c;
                        best_n = cnt;
                    }
                }
                adoptions.emplace_back(v, best);
            }
            for (const auto& [v, c] : adoptions) {
                cluster_of[v] = c;
                progress = true;
            }
        }
    }

    // Whatever is still unassigned has no path to any core: group those
    // components as kind `other` (a boundary-free graph lands here whole).
    {
        UnionFind lf(n);
        for (NodeId u = 0; u < n; ++u) {
            if (cluster_of[u] != kInvalidNode) continue;
            for (NodeId v : graph.neighbors(u))
                if (v > u && cluster_of[v] == kInvalidNode) lf.unite(u, v);
        }
        std::unordered_map<std::uint32_t, ClusterId> root_to_cluster;
        for (NodeId v = 0; v < n; ++v) {
            if (cluster_of[v] != kInvalidNode) continue;
            std::uint32_t r = lf.find(v);
            auto it = root_to_cluster.find(r);
            if (it == root_to_cluster.end()) {
                it = root_to_cluster.emplace(r, static_cast<ClusterId>(kinds.size())).first;
                kinds.push_back(ClusterKind::other);
            }
            cluster_of[v] = it->second;
        }
    }

    // Size floor: merge undersized clusters into the adjacent cluster with
    // the most contact edges (tie: lowest id); smallest cluster first.
    {
        while (true) {
            std::vector<std::size_t> size(kinds.size(), 0);
            for (NodeId v = 0; v < n; ++v) ++size[cluster_of[v]];
            ClusterId victim = kInvalidNode;
            for (ClusterId c = 0; c < kinds.size(); ++c) {
                if (size[c] == 0 || size[c] >= params.min_cluster_size) continue;
                if (victim == kInvalidNode || size[c] < size[victim]) victim = c;
            }
            if (victim == kInvalidNode) break;
            std::map<ClusterId, int> contact;
            for (NodeId u = 0; u < n; ++u) {
                if (cluster_of[u] != victim) continue;
                for (NodeId v : graph.neighbors(u))
                    if (cluster_of[v] != victim) ++contact[cluster_of[v]];
            }
            if (contact.empty()) break;  // isolated component, nothing to merge into
            ClusterId target = contact.begin()->first;
            int best = contact.begin()->second;
            for (const auto& [c, cnt] : contact) {
                if (cnt > best) {
                    target = c;
                    best = cnt;
                }
            }
            for (NodeId v = 0; v < n; ++v)
                if (cluster_of[v] == victim) cluster_of[v] = target;
        }
    }

    // Dense relabel ordered by smallest member id.
    {
        std::vector<NodeId> first_member(kinds.size(), kInvalidNode);
        for (NodeId v = n; v-- > 0;) first_member[cluster_of[v]] = v;
        std::vector<ClusterId> order;
        for (ClusterId c = 0; c < kinds.size(); ++c)
            if (first_member[c] != kInvalidNode) order.push_back(c);
        std::sort(order.begin(), order.end(),
                  [&](ClusterId a, ClusterId b) { return first_member[a] < first_member[b]; });
        std::vector<ClusterId> remap(kinds.size(), kInvalidNode);
        std::vector<ClusterKind> new_kinds;
        for (ClusterId c : order) {
            remap[c] = static_cast<ClusterId>(new_kinds.size());
            new_kinds.push_back(kinds[c]);
        }
        for (NodeId v = 0; v < n; ++v) out.assignment[v] = remap[cluster_of[v]];
        out.kinds = std::move(new_kinds);
    }
    return out;
}

Clustering clusters_from_labels(const CommGraph& graph, const std::vector<int>& labels) {
    const std::size_t n = graph.node_count();
    if (labels.size() != n)
        throw std::invalid_argument("clusters_from_labels: label count does not match graph");
    UnionFind uf(n);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : graph.neighbors(u))
            if (v > u && labels[u] == labels[v]) uf.unite(u, v);

    Clustering out;
    out.assignment.assign(n, kInvalidNode);
    std::unordered_map<std::uint32_t, ClusterId> root_to_cluster;
    for (NodeId v = 0; v < n; ++v) {
        std::uint32_t r = uf.find(v);
        auto it = root_to_cluster.find(r);
        if (it == root_to_cluster.end()) {
            it = root_to_cluster.emplace(r, static_cast<ClusterId>(out.kinds.size())).first;
            out.kinds.push_back(ClusterKind::other);
        }
        out.assignment[v] = it->second;
    }
    return out;
}

std::vector<std::vector<NodeId>> Clustering::members() const {
    std::vector<std::vector<NodeId>> m(kinds.size());
    for (NodeId v = 0; v < assignment.size(); ++v) m[assignment[v]].push_back(v);
    return m;
}

bool ClusterGraph::has_vertex(ClusterId c) const {
    return std::binary_search(vertices.begin(), vertices.end(), c);
}

bool ClusterGraph::has_edge(ClusterId a, ClusterId b) const {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

const ClusterEdgeAttrs* ClusterGraph::attrs(ClusterId a, ClusterId b) const {
    auto it = edge_attrs.find(pair_key(a, b));
    return it == edge_attrs.end() ? nullptr : &it->second;
}

std::vector<ClusterId> ClusterGraph::neighbors(ClusterId c) const {
    std::vector<ClusterId> out;
    for (const auto& [a, b] : edges) {
        if (a == c) out.push_back(b);
        else if (b == c) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ClusterGraph build_cluster_graph(const Clustering& clustering, const CommGraph& graph,
                                 ClusterGraphVariant variant) {
    const std::size_t n = graph.node_count();
    if (clustering.assignment.size() != n)
        throw std::invalid_argument("build_cluster_graph: clustering does not match graph");

    ClusterGraph cg;
    cg.variant = variant;
    const std::size_t k = clustering.cluster_count();

    std::vector<std::uint32_t> sizes(k, 0);
    for (NodeId v = 0; v < n; ++v) ++sizes[clustering.assignment[v]];

    // Border zones: endpoints of cut edges, per cluster pair.
    std::map<std::pair<ClusterId, ClusterId>, std::vector<NodeId>> zones;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            ClusterId cu = clustering.assignment[u], cv = clustering.assignment[v];
            if (cu == cv) continue;
            auto key = std::minmax(cu, cv);
            auto& zone = zones[{key.first, key.second}];
            zone.push_back(u);
            zone.push_back(v);
        }
    }
    for (auto& [key, zone] : zones) {
        std::sort(zone.begin(), zone.end());
        zone.erase(std::unique(zone.begin(), zone.end()), zone.end());
    }

    for (ClusterId c = 0; c < k; ++c) {
        cg.vertices.push_back(c);
        cg.kind[c] = clustering.kinds[c];
        cg.node_count[c] = sizes[c];
    }
    for (const auto& [key, zone] : zones) {
        cg.edges.push_back(key);
        ClusterEdgeAttrs a;
        a.node_count = static_cast<std::uint32_t>(zone.size());
        cg.edge_attrs[pair_key(key.first, key.second)] = a;
    }

    if (variant == ClusterGraphVariant::street_as_edge) {
        for (ClusterId s = 0; s < k; ++s) {
            if (clustering.kinds[s] != ClusterKind::street) continue;
            auto nbrs = cg.neighbors(s);
            if (nbrs.size() != 2) continue;
            ClusterId i1 = nbrs[0], i2 = nbrs[1];
            if (i1 == i2) continue;
            if (cg.kind.at(i1) != ClusterKind::intersection ||
                cg.kind.at(i2) != ClusterKind::intersection)
                continue;
            if (!cg.has_vertex(i1) || !cg.has_vertex(i2)) continue;
            if (cg.has_edge(i1, i2)) continue;  // parallel street stays a vertex

            // Drop the street vertex and its two edges, bridge the
            // intersections directly. The street's member set becomes the
            // edge's zone.
            cg.vertices.erase(std::find(cg.vertices.begin(), cg.vertices.end(), s));
            cg.kind.erase(s);
            cg.node_count.erase(s);
            auto drop_edge = [&](ClusterId a, ClusterId b) {
                auto key = std::minmax(a, b);
                cg.edges.erase(
                    std::find(cg.edges.begin(), cg.edges.end(),
                              std::make_pair(key.first, key.second)));
                cg.edge_attrs.erase(pair_key(a, b));
            };
            drop_edge(s, i1);
            drop_edge(s, i2);
            auto key = std::minmax(i1, i2);
            cg.edges.insert(std::lower_bound(cg.edges.begin(), cg.edges.end(),
                                             std::make_pair(key.first, key.second)),
                            {key.first, key.second});
            ClusterEdgeAttrs a;
            a.node_count = sizes[s];
            cg.edge_attrs[pair_key(i1, i2)] = a;
            cg.contracted_street[pair_key(i1, i2)] = s;
        }
    }
    return cg;
}

void annotate_edges(ClusterGraph& cg, const Clustering& clustering, const CommGraph& graph,
                    const std::vector<NodeAttrs>& node_attrs) {
    const std::size_t n = graph.node_count();
    if (node_attrs.size() != n)
        throw std::invalid_argument("annotate_edges: node_attrs size does not match graph");
    if (clustering.assignment.size() != n)
        throw std::invalid_argument("annotate_edges: clustering does not match graph");

    // Zone per edge: cut-edge endpoints; for a contracted street edge, the
    // street's whole member set.
    std::unordered_map<std::uint64_t, std::vector<NodeId>> zones;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            ClusterId cu = clustering.assignment[u], cv = clustering.assignment[v];
            if (cu == cv) continue;
            if (!cg.has_edge(cu, cv)) continue;
            auto& zone = zones[pair_key(cu, cv)];
            zone.push_back(u);
            zone.push_back(v);
        }
    }
    for (const auto& [key, street] : cg.contracted_street) {
        auto& zone = zones[key];
        zone.clear();
        for (NodeId v = 0; v < n; ++v)
            if (clustering.assignment[v] == street) zone.push_back(v);
    }

    for (const auto& [a, b] : cg.edges) {
        auto it = zones.find(pair_key(a, b));
        auto& attrs = cg.edge_attrs[pair_key(a, b)];
        if (it == zones.end() || it->second.empty()) {
            attrs.residual_energy = 0;
            attrs.bandwidth = 0;
            continue;
        }
        auto& zone = it->second;
        std::sort(zone.begin(), zone.end());
        zone.erase(std::unique(zone.begin(), zone.end()), zone.end());
        double esum = 0;
        double bmin = std::numeric_limits<double>::infinity();
        for (NodeId v : zone) {
            esum += node_attrs[v].residual_energy;
            bmin = std::min(bmin, node_attrs[v].bandwidth);
        }
        attrs.residual_energy = esum / static_cast<double>(zone.size());
        attrs.bandwidth = bmin;
        attrs.node_count = static_cast<std::uint32_t>(zone.size());
    }
}

NodeLocation node_location(const Clustering& clustering, const ClusterGraph& cg, NodeId v) {
    if (v >= clustering.assignment.size())
        throw std::invalid_argument("node_location: node id out of range");
    NodeLocation loc;
    loc.cluster = clustering.assignment[v];
    loc.kind = clustering.kinds[loc.cluster];
    if (cg.has_vertex(loc.cluster)) {
        loc.neighbor_clusters = cg.neighbors(loc.cluster);
        return loc;
    }
    // The cluster was contracted into an edge: its neighbors are the two
    // intersections that edge connects.
    for (const auto& [key, street] : cg.contracted_street) {
        if (street != loc.cluster) continue;
        ClusterId a = static_cast<ClusterId>(key >> 32);
        ClusterId b = static_cast<ClusterId>(key & 0xffffffffu);
        loc.neighbor_clusters = {std::min(a, b), std::max(a, b)};
        return loc;
    }
    return loc;
}

const char* cluster_kind_string(ClusterKind k) {
    switch (k) {
        case ClusterKind::street: return "street";
        case ClusterKind::intersection: return "intersection";
        case ClusterKind::other: return "other";
    }
    return "other";
}

}  // namespace locfree
