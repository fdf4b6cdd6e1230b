#include "locfree/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace locfree {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::uint64_t uinteger(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        fail(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

void check_format(const json& j, const char* expected, const std::string& path) {
    const json& f = member(j, "format", path);
    if (!f.is_string() || f.get<std::string>() != expected)
        fail(path + ".format", std::string("expected \"") + expected + "\"");
}

Point2D point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

double round6(double v) {
    if (v == 0 || !std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace

json deployment_to_json(const DeploymentSpec& spec) {
    json j;
    j["format"] = "locfree-deployment/1";
    j["comm_radius"] = spec.comm_radius;
    j["seed"] = spec.seed;
    json segments = json::array();
    for (const auto& seg : spec.segments) {
        json s;
        json poly = json::array();
        for (const auto& p : seg.polyline) poly.push_back({p.x, p.y});
        s["polyline"] = std::move(poly);
        s["width"] = seg.width;
        s["node_density"] = seg.node_density;
        segments.push_back(std::move(s));
    }
    j["segments"] = std::move(segments);
    json regions = json::array();
    for (const auto& ar : spec.anchor_regions) {
        json r;
        r["rect"] = {ar.rect.x0, ar.rect.y0, ar.rect.x1, ar.rect.y1};
        r["anchor_count"] = ar.anchor_count;
        regions.push_back(std::move(r));
    }
    j["anchor_regions"] = std::move(regions);
    return j;
}

DeploymentSpec deployment_from_json(const json& j) {
    const std::string root = "$";
    check_format(j, "locfree-deployment/1", root);
    DeploymentSpec spec;
    spec.comm_radius = number(member(j, "comm_radius", root), root + ".comm_radius");
    spec.seed = uinteger(member(j, "seed", root), root + ".seed");
    const json& segments = member(j, "segments", root);
    if (!segments.is_array()) fail(root + ".segments", "expected an array");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const std::string p = root + ".segments[" + std::to_string(i) + "]";
        const json& s = segments[i];
        StreetSegment seg;
        const json& poly = member(s, "polyline", p);
        if (!poly.is_array() || poly.size() < 2)
            fail(p + ".polyline", "expected an array of at least 2 points");
        for (std::size_t k = 0; k < poly.size(); ++k)
            seg.polyline.push_back(point(poly[k], p + ".polyline[" + std::to_string(k) + "]"));
        seg.width = number(member(s, "width", p), p + ".width");
        seg.node_density = number(member(s, "node_density", p), p + ".node_density");
        spec.segments.push_back(std::move(seg));
    }
    if (j.contains("anchor_regions")) {
        const json& regions = j["anchor_regions"];
        if (!regions.is_array()) fail(root + ".anchor_regions", "expected an array");
        for (std::size_t i = 0; i < regions.size(); ++i) {
            const std::string p = root + ".anchor_regions[" + std::to_string(i) + "]";
            const json& r = regions[i];
            AnchorRegion ar;
            const json& rect = member(r, "rect", p);
            if (!rect.is_array() || rect.size() != 4)
                fail(p + ".rect", "expected [x0, y0, x1, y1]");
            ar.rect = {number(rect[0], p + ".rect[0]"), number(rect[1], p + ".rect[1]"),
                       number(rect[2], p + ".rect[2]"), number(rect[3], p + ".rect[3]")};
            ar.anchor_count =
                static_cast<std::uint32_t>(uinteger(member(r, "anchor_count", p), p + ".anchor_count"));
            spec.anchor_regions.push_back(ar);
        }
    }
    return spec;
}

json instance_to_json(const NetworkInstance& instance) {
    json j;
    j["format"] = "locfree-instance/1";
    j["comm_radius"] = instance.comm_radius;
    json pos = json::array();
    for (const auto& p : instance.positions) pos.push_back({p.x, p.y});
    j["positions"] = std::move(pos);
    j["anchors"] = instance.anchors;
    return j;
}

NetworkInstance instance_from_json(const json& j) {
    const std::string root = "$";
    check_format(j, "locfree-instance/1", root);
    NetworkInstance instance;
    instance.comm_radius = number(member(j, "comm_radius", root), root + ".comm_radius");
    if (instance.comm_radius <= 0) fail(root + ".comm_radius", "must be > 0");
    const json& pos = member(j, "positions", root);
    if (!pos.is_array()) fail(root + ".positions", "expected an array");
    for (std::size_t i = 0; i < pos.size(); ++i)
        instance.positions.push_back(point(pos[i], root + ".positions[" + std::to_string(i) + "]"));
    const json& anchors = member(j, "anchors", root);
    if (!anchors.is_array()) fail(root + ".anchors", "expected an array");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const auto a = uinteger(anchors[i], root + ".anchors[" + std::to_string(i) + "]");
        if (a >= instance.positions.size())
            fail(root + ".anchors[" + std::to_string(i) + "]", "anchor id out of range");
        instance.anchors.push_back(static_cast<NodeId>(a));
    }
    std::sort(instance.anchors.begin(), instance.anchors.end());
    instance.anchors.erase(std::unique(instance.anchors.begin(), instance.anchors.end()),
                           instance.anchors.end());
    instance.graph = build_unit_disk_graph(instance.positions, instance.comm_radius);
    return instance;
}

json placement_to_json(const Placement& placement) {
    json j;
    j["format"] = "locfree-placement/1";
    j["frame"] = placement.frame == Frame::global ? "global" : "virtual";
    json coords = json::array();
    for (const auto& c : placement.coords) {
        if (c)
            coords.push_back({c->x, c->y});
        else
            coords.push_back(nullptr);
    }
    j["coords"] = std::move(coords);
    return j;
}

Placement placement_from_json(const json& j) {
    const std::string root = "$";
    check_format(j, "locfree-placement/1", root);
    Placement p;
    const json& frame = member(j, "frame", root);
    if (frame == "global")
        p.frame = Frame::global;
    else if (frame == "virtual")
        p.frame = Frame::virtual_frame;
    else
        fail(root + ".frame", "expected \"global\" or \"virtual\"");
    const json& coords = member(j, "coords", root);
    if (!coords.is_array()) fail(root + ".coords", "expected an array");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].is_null())
            p.coords.emplace_back(std::nullopt);
        else
            p.coords.emplace_back(point(coords[i], root + ".coords[" + std::to_string(i) + "]"));
    }
    return p;
}

json clustering_to_json(const Clustering& clustering) {
    json j;
    j["format"] = "locfree-clustering/1";
    j["assignment"] = clustering.assignment;
    json kinds = json::array();
    for (ClusterKind k : clustering.kinds) kinds.push_back(cluster_kind_string(k));
    j["kinds"] = std::move(kinds);
    return j;
}

namespace {

ClusterKind kind_from_string(const std::string& s, const std::string& path) {
    if (s == "street") return ClusterKind::street;
    if (s == "intersection") return ClusterKind::intersection;
    if (s == "other") return ClusterKind::other;
    fail(path, "unknown cluster kind \"" + s + "\"");
}

}  // namespace

Clustering clustering_from_json(const json& j) {
    const std::string root = "$";
    check_format(j, "locfree-clustering/1", root);
    Clustering c;
    const json& kinds = member(j, "kinds", root);
    if (!kinds.is_array()) fail(root + ".kinds", "expected an array");
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const std::string p = root + ".kinds[" + std::to_string(i) + "]";
        if (!kinds[i].is_string()) fail(p, "expected a string");
        c.kinds.push_back(kind_from_string(kinds[i].get<std::string>(), p));
    }
    const json& assignment = member(j, "assignment", root);
    if (!assignment.is_array()) fail(root + ".assignment", "expected an array");
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const std::string p = root + ".assignment[" + std::to_string(i) + "]";
        const auto a = uinteger(assignment[i], p);
        if (a >= c.kinds.size()) fail(p, "cluster id out of range");
        c.assignment.push_back(static_cast<ClusterId>(a));
    }
    return c;
}

json cluster_graph_to_json(const ClusterGraph& cg) {
    json j;
    j["format"] = "locfree-clustergraph/1";
    j["variant"] = cg.variant == ClusterGraphVariant::cluster_per_vertex ? "cluster_per_vertex"
                                                                         : "street_as_edge";
    json vertices = json::array();
    for (ClusterId c : cg.vertices)
        vertices.push_back({c, cluster_kind_string(cg.kind.at(c)), cg.node_count.at(c)});
    j["vertices"] = std::move(vertices);
    json edges = json::array();
    for (const auto& [a, b] : cg.edges) {
        const ClusterEdgeAttrs& attrs = cg.edge_attrs.at(pair_key(a, b));
        edges.push_back({a, b, round6(attrs.residual_energy), round6(attrs.bandwidth),
                         attrs.node_count});
    }
    j["edges"] = std::move(edges);
    if (!cg.contracted_street.empty()) {
        json contracted = json::array();
        std::vector<std::pair<std::uint64_t, ClusterId>> sorted(cg.contracted_street.begin(),
                                                                cg.contracted_street.end());
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [key, street] : sorted)
            contracted.push_back({static_cast<ClusterId>(key >> 32),
                                  static_cast<ClusterId>(key & 0xffffffffu), street});
        j["contracted"] = std::move(contracted);
    }
    return j;
}

ClusterGraph cluster_graph_from_json(const json& j) {
    const std::string root = "$";
    check_format(j, "locfree-clustergraph/1", root);
    ClusterGraph cg;
    const json& variant = member(j, "variant", root);
    if (variant == "cluster_per_vertex")
        cg.variant = ClusterGraphVariant::cluster_per_vertex;
    else if (variant == "street_as_edge")
        cg.variant = ClusterGraphVariant::street_as_edge;
    else
        fail(root + ".variant", "unknown variant");
    const json& vertices = member(j, "vertices", root);
    if (!vertices.is_array()) fail(root + ".vertices", "expected an array");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string p = root + ".vertices[" + std::to_string(i) + "]";
        const json& v = vertices[i];
        if (!v.is_array() || v.size() != 3) fail(p, "expected [id, kind, node_count]");
        const auto id = static_cast<ClusterId>(uinteger(v[0], p + "[0]"));
        cg.vertices.push_back(id);
        if (!v[1].is_string()) fail(p + "[1]", "expected a string");
        cg.kind[id] = kind_from_string(v[1].get<std::string>(), p + "[1]");
        cg.node_count[id] = static_cast<std::uint32_t>(uinteger(v[2], p + "[2]"));
    }
    std::sort(cg.vertices.begin(), cg.vertices.end());
    const json& edges = member(j, "edges", root);
    if (!edges.is_array()) fail(root + ".edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string p = root + ".edges[" + std::to_string(i) + "]";
        const json& e = edges[i];
        if (!e.is_array() || e.size() != 5)
            fail(p, "expected [a, b, residual_energy, bandwidth, node_count]");
        auto a = static_cast<ClusterId>(uinteger(e[0], p + "[0]"));
        auto b = static_cast<ClusterId>(uinteger(e[1], p + "[1]"));
        if (a == b) fail(p, "self loop");
        if (a > b) std::swap(a, b);
        cg.edges.emplace_back(a, b);
        ClusterEdgeAttrs attrs;
        attrs.residual_energy = number(e[2], p + "[2]");
        attrs.bandwidth = number(e[3], p + "[3]");
        attrs.node_count = static_cast<std::uint32_t>(uinteger(e[4], p + "[4]"));
        cg.edge_attrs[pair_key(a, b)] = attrs;
    }
    std::sort(cg.edges.begin(), cg.edges.end());
    if (j.contains("contracted")) {
        const json& contracted = j["contracted"];
        if (!contracted.is_array()) fail(root + ".contracted", "expected an array");
        for (std::size_t i = 0; i < contracted.size(); ++i) {
            const std::string p = root + ".contracted[" + std::to_string(i) + "]";
            const json& c = contracted[i];
            if (!c.is_array() || c.size() != 3) fail(p, "expected [a, b, street]");
            cg.contracted_street[pair_key(static_cast<ClusterId>(uinteger(c[0], p + "[0]")),
                                          static_cast<ClusterId>(uinteger(c[1], p + "[1]")))] =
                static_cast<ClusterId>(uinteger(c[2], p + "[2]"));
        }
    }
    return cg;
}

std::string to_graphviz(const ClusterGraph& cg) {
    std::ostringstream out;
    out << "graph clusters {\n";
    out << "  overlap=false;\n  node [style=filled];\n";
    for (ClusterId c : cg.vertices) {
        const char* color = "lightgray";
        switch (cg.kind.at(c)) {
            case ClusterKind::street: color = "lightblue"; break;
            case ClusterKind::intersection: color = "salmon"; break;
            case ClusterKind::other: color = "lightgray"; break;
        }
        out << "  c" << c << " [label=\"c" << c << "\\n" << cluster_kind_string(cg.kind.at(c))
            << "\\n" << cg.node_count.at(c) << " nodes\", fillcolor=" << color << "];\n";
    }
    char buf[64];
    for (const auto& [a, b] : cg.edges) {
        const ClusterEdgeAttrs& attrs = cg.edge_attrs.at(pair_key(a, b));
        std::snprintf(buf, sizeof buf, "e=%.3g b=%.3g n=%u", attrs.residual_energy,
                      attrs.bandwidth, attrs.node_count);
        out << "  c" << a << " -- c" << b << " [label=\"" << buf << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

json report_to_json(const ConsistencyReport& report, const MetricsParams& params) {
    json j;
    j["format"] = "locfree-report/1";
    j["positioned"] = report.positioned;
    j["unpositioned"] = report.unpositioned;
    j["rms_error"] = round6(report.rms_error);
    j["c1_violations"] = report.c1_violations.size();
    j["c1_skipped_edges"] = report.c1_skipped_edges;
    j["c2_violations"] = report.c2_violations.size();
    j["fold_pairs"] = report.fold_pairs.size();
    j["params"] = {{"c1_max_dist_factor", params.c1_max_dist_factor},
                   {"c2_min_dist_factor", params.c2_min_dist_factor},
                   {"fold_far_factor", params.fold_far_factor},
                   {"fold_near_factor", params.fold_near_factor}};
    json alignment;
    alignment["rotation"] = round6(report.applied_alignment.rotation);
    alignment["reflected"] = report.applied_alignment.reflected;
    alignment["scale"] = round6(report.applied_alignment.scale);
    alignment["low_confidence"] = report.applied_alignment.low_confidence;
    j["alignment"] = std::move(alignment);
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path + ": write failed");
}

json load_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based offset into the input
        std::size_t line = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < limit; ++i)
            if (text[i] == '\n') ++line;
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + e.what());
    }
}

}  // namespace locfree
