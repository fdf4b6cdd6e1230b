#include "locfree/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

#include "locfree/rng.hpp"

namespace locfree {

namespace {

constexpr double kWidth = 900, kHeight = 700, kMargin = 40;

struct Mapper {
    double x0 = 0, y0 = 0, scale = 1, ox = 0, oy = 0, h = 0;

    // SVG y grows downward; world y grows upward.
    double mx(double x) const { return ox + (x - x0) * scale; }
    double my(double y) const { return oy + h - (y - y0) * scale; }
};

Mapper fit(double min_x, double min_y, double max_x, double max_y, double ox, double oy,
           double w, double h) {
    Mapper m;
    const double spanx = std::max(max_x - min_x, 1e-9);
    const double spany = std::max(max_y - min_y, 1e-9);
    m.scale = std::min(w / spanx, h / spany);
    m.x0 = min_x;
    m.y0 = min_y;
    m.ox = ox + (w - spanx * m.scale) / 2;
    m.oy = oy + (h - spany * m.scale) / 2;
    m.h = spany * m.scale;
    return m;
}

void fmt(std::ostringstream& out, const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    out << buf;
}

/// BFS forest over edges with both endpoints positioned.
std::vector<std::pair<NodeId, NodeId>> spanning_edges(const CommGraph& graph,
                                                      const Placement& placement) {
    const std::size_t n = graph.node_count();
    std::vector<char> seen(n, 0);
    std::vector<std::pair<NodeId, NodeId>> tree;
    for (NodeId root = 0; root < n; ++root) {
        if (seen[root] || !placement.coords[root]) continue;
        seen[root] = 1;
        std::deque<NodeId> queue{root};
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            for (NodeId u : graph.neighbors(v)) {
                if (seen[u] || !placement.coords[u]) continue;
                seen[u] = 1;
                tree.emplace_back(std::min(u, v), std::max(u, v));
                queue.push_back(u);
            }
        }
    }
    return tree;
}

}  // namespace

std::string render_placement_svg(const NetworkInstance& instance, const Placement& placement,
                                 const ConsistencyReport& report, const std::string& caption,
                                 std::uint64_t edge_sample_seed) {
    std::ostringstream out;
    fmt(out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
        "viewBox=\"0 0 %.0f %.0f\">\n",
        kWidth, kHeight, kWidth, kHeight);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"16\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << caption
        << "</text>\n";

    const std::size_t positioned = placement.positioned_count();
    if (positioned == 0) {
        out << "<text x=\"16\" y=\"52\" font-family=\"sans-serif\" font-size=\"14\" "
               "fill=\"#b00\">warning: no node carries a position; nothing to draw</text>\n";
        out << "</svg>\n";
        return out.str();
    }

    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_y;
    for (const auto& c : placement.coords) {
        if (!c) continue;
        min_x = std::min(min_x, c->x);
        max_x = std::max(max_x, c->x);
        min_y = std::min(min_y, c->y);
        max_y = std::max(max_y, c->y);
    }
    const Mapper m =
        fit(min_x, min_y, max_x, max_y, kMargin, kMargin + 20, kWidth - 2 * kMargin,
            kHeight - 2 * kMargin - 20);

    // Spanning tree keeps the figure legible; a fixed-seed 10% of the
    // remaining edges hints at density without burying the nodes.
    auto tree = spanning_edges(instance.graph, placement);
    out << "<g stroke=\"#c8c8c8\" stroke-width=\"0.6\">\n";
    for (const auto& [u, v] : tree)
        fmt(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
            m.mx(placement.coords[u]->x), m.my(placement.coords[u]->y),
            m.mx(placement.coords[v]->x), m.my(placement.coords[v]->y));
    std::vector<std::pair<NodeId, NodeId>> tree_sorted = tree;
    std::sort(tree_sorted.begin(), tree_sorted.end());
    for (NodeId u = 0; u < instance.node_count(); ++u) {
        for (NodeId v : instance.graph.neighbors(u)) {
            if (v <= u || !placement.coords[u] || !placement.coords[v]) continue;
            if (std::binary_search(tree_sorted.begin(), tree_sorted.end(), std::make_pair(u, v)))
                continue;
            if (mix_seed(edge_sample_seed, u, v) % 10 != 0) continue;
            fmt(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
                m.mx(placement.coords[u]->x), m.my(placement.coords[u]->y),
                m.mx(placement.coords[v]->x), m.my(placement.coords[v]->y));
        }
    }
    out << "</g>\n";

    // Highlights reference aligned coordinates for virtual frames, but the
    // node dots below are drawn at raw placed coordinates; pairs whose
    // endpoints are positioned are always drawable.
    out << "<g stroke=\"#e69100\" stroke-width=\"1.2\">\n";
    for (const auto& v : report.c2_violations) {
        if (!placement.coords[v.a] || !placement.coords[v.b]) continue;
        fmt(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
            m.mx(placement.coords[v.a]->x), m.my(placement.coords[v.a]->y),
            m.mx(placement.coords[v.b]->x), m.my(placement.coords[v.b]->y));
    }
    out << "</g>\n<g stroke=\"#d00000\" stroke-width=\"1.4\">\n";
    for (const auto& f : report.fold_pairs) {
        if (!placement.coords[f.a] || !placement.coords[f.b]) continue;
        fmt(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
            m.mx(placement.coords[f.a]->x), m.my(placement.coords[f.a]->y),
            m.mx(placement.coords[f.b]->x), m.my(placement.coords[f.b]->y));
    }
    out << "</g>\n";

    out << "<g fill=\"#7a7a7a\">\n";
    for (NodeId v = 0; v < instance.node_count(); ++v) {
        if (!placement.coords[v] || instance.is_anchor(v)) continue;
        fmt(out, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\"/>\n", m.mx(placement.coords[v]->x),
            m.my(placement.coords[v]->y));
    }
    out << "</g>\n<g fill=\"#000000\">\n";
    for (NodeId a : instance.anchors) {
        if (!placement.coords[a]) continue;
        fmt(out, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.6\"/>\n", m.mx(placement.coords[a]->x),
            m.my(placement.coords[a]->y));
    }
    out << "</g>\n";

    char stats[160];
    std::snprintf(stats, sizeof stats,
                  "positioned %zu/%zu, range violations %zu, proximity violations %zu, folds %zu",
                  positioned, instance.node_count(), report.c1_violations.size(),
                  report.c2_violations.size(), report.fold_pairs.size());
    out << "<text x=\"16\" y=\"" << (kHeight - 14)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\">" << stats
        << "</text>\n";

    if (placement.frame == Frame::global) {
        // Ground-truth inset, top right.
        const double iw = 200, ih = 150, ix = kWidth - iw - 12, iy = 34;
        fmt(out,
            "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"#fafafa\" "
            "stroke=\"#999\"/>\n",
            ix, iy, iw, ih);
        double tmin_x = std::numeric_limits<double>::infinity(), tmin_y = tmin_x;
        double tmax_x = -tmin_x, tmax_y = -tmin_y;
        for (const auto& p : instance.positions) {
            tmin_x = std::min(tmin_x, p.x);
            tmax_x = std::max(tmax_x, p.x);
            tmin_y = std::min(tmin_y, p.y);
            tmax_y = std::max(tmax_y, p.y);
        }
        const Mapper im = fit(tmin_x, tmin_y, tmax_x, tmax_y, ix + 6, iy + 6, iw - 12, ih - 24);
        out << "<g fill=\"#9a9a9a\">\n";
        for (const auto& p : instance.positions)
            fmt(out, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"0.7\"/>\n", im.mx(p.x), im.my(p.y));
        out << "</g>\n";
        fmt(out,
            "<text x=\"%.0f\" y=\"%.0f\" font-family=\"sans-serif\" font-size=\"11\" "
            "fill=\"#444\">ground truth</text>\n",
            ix + 6, iy + ih - 6);
    }

    out << "</svg>\n";
    return out.str();
}

std::string render_cluster_graph_svg(const NetworkInstance& instance,
                                     const Clustering& clustering, const ClusterGraph& cg,
                                     const std::string& caption) {
    std::ostringstream out;
    fmt(out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
        "viewBox=\"0 0 %.0f %.0f\">\n",
        kWidth, kHeight, kWidth, kHeight);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"16\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << caption
        << "</text>\n";

    // Vertices sit at the centroid of their members' true positions.
    std::unordered_map<ClusterId, Point2D> centroid;
    std::unordered_map<ClusterId, std::size_t> count;
    for (NodeId v = 0; v < instance.node_count(); ++v) {
        const ClusterId c = clustering.assignment[v];
        centroid[c].x += instance.positions[v].x;
        centroid[c].y += instance.positions[v].y;
        ++count[c];
    }
    for (auto& [c, p] : centroid) {
        p.x /= static_cast<double>(count[c]);
        p.y /= static_cast<double>(count[c]);
    }

    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_y;
    for (ClusterId c : cg.vertices) {
        const Point2D& p = centroid[c];
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    if (cg.vertices.empty()) {
        out << "<text x=\"16\" y=\"52\" font-family=\"sans-serif\" font-size=\"14\" "
               "fill=\"#b00\">warning: empty cluster graph</text>\n</svg>\n";
        return out.str();
    }
    const Mapper m = fit(min_x, min_y, max_x, max_y, kMargin + 30, kMargin + 30,
                         kWidth - 2 * kMargin - 60, kHeight - 2 * kMargin - 60);

    out << "<g stroke=\"#808080\" stroke-width=\"1.4\">\n";
    for (const auto& [a, b] : cg.edges) {
        const Point2D pa = centroid[a];
        const Point2D pb = centroid[b];
        fmt(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n", m.mx(pa.x),
            m.my(pa.y), m.mx(pb.x), m.my(pb.y));
    }
    out << "</g>\n";

    for (const auto& [a, b] : cg.edges) {
        const ClusterEdgeAttrs& attrs = cg.edge_attrs.at(pair_key(a, b));
        const Point2D& pa = centroid[a];
        const Point2D& pb = centroid[b];
        char label[64];
        std::snprintf(label, sizeof label, "n=%u e=%.2g", attrs.node_count,
                      attrs.residual_energy);
        fmt(out,
            "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"9\" "
            "fill=\"#666\">%s</text>\n",
            (m.mx(pa.x) + m.mx(pb.x)) / 2 + 3, (m.my(pa.y) + m.my(pb.y)) / 2 - 3, label);
    }

    for (ClusterId c : cg.vertices) {
        const Point2D& p = centroid[c];
        const double r =
            std::clamp(2.0 * std::sqrt(static_cast<double>(cg.node_count.at(c))), 5.0, 22.0);
        const char* fill = "#b9b9b9";
        switch (cg.kind.at(c)) {
            case ClusterKind::street: fill = "#7fb2e5"; break;
            case ClusterKind::intersection: fill = "#e58787"; break;
            case ClusterKind::other: fill = "#b9b9b9"; break;
        }
        fmt(out,
            "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"%s\" stroke=\"#333\" "
            "stroke-width=\"0.8\"/>\n",
            m.mx(p.x), m.my(p.y), r, fill);
        fmt(out,
            "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"10\" "
            "text-anchor=\"middle\">c%u</text>\n",
            m.mx(p.x), m.my(p.y) + 3, c);
    }

    char stats[120];
    std::snprintf(stats, sizeof stats, "%zu clusters, %zu adjacencies", cg.vertices.size(),
                  cg.edges.size());
    out << "<text x=\"16\" y=\"" << (kHeight - 14)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\">" << stats
        << "</text>\n</svg>\n";
    return out.str();
}

}  // namespace locfree
