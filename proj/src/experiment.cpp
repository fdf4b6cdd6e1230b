#include "locfree/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "locfree/json_io.hpp"
#include "locfree/rng.hpp"
#include "locfree/svg_render.hpp"

namespace locfree {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double opt_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw std::runtime_error(std::string("$.") + key + ": expected a number");
    return j[key].get<double>();
}

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Distinct routing endpoints, one shared list per seed so pipelines are
/// compared on identical queries.
std::vector<std::pair<NodeId, NodeId>> sample_pairs(std::size_t n, int count,
                                                    std::uint64_t seed) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    if (n < 2 || count <= 0) return pairs;
    Rng rng(mix_seed(seed, 0x726f7574u));
    pairs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const NodeId src = static_cast<NodeId>(rng.below(n));
        NodeId dst = static_cast<NodeId>(rng.below(n));
        while (dst == src) dst = static_cast<NodeId>(rng.below(n));
        pairs.emplace_back(src, dst);
    }
    return pairs;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j, const std::string& base_dir) {
    const std::string root = "$";
    if (!j.is_object()) throw std::runtime_error("$: expected an object");
    if (!j.contains("format") || j["format"] != "locfree-experiment/1")
        throw std::runtime_error("$.format: expected \"locfree-experiment/1\"");

    ExperimentConfig cfg;
    if (j.contains("deployment")) {
        cfg.deployment = deployment_from_json(j["deployment"]);
    } else if (j.contains("deployment_file")) {
        if (!j["deployment_file"].is_string())
            throw std::runtime_error("$.deployment_file: expected a string");
        const fs::path p = fs::path(base_dir) / j["deployment_file"].get<std::string>();
        cfg.deployment = deployment_from_json(load_json_file(p.string()));
    } else {
        throw std::runtime_error("$: needs \"deployment\" or \"deployment_file\"");
    }

    cfg.noise_stddev_fraction = opt_number(j, "noise_stddev_fraction", cfg.noise_stddev_fraction);
    if (cfg.noise_stddev_fraction < 0)
        throw std::runtime_error("$.noise_stddev_fraction: must be >= 0");

    if (j.contains("seeds")) {
        if (!j["seeds"].is_array() || j["seeds"].empty())
            throw std::runtime_error("$.seeds: expected a non-empty array");
        cfg.seeds.clear();
        for (const auto& s : j["seeds"]) {
            if (!s.is_number_integer() && !s.is_number_unsigned())
                throw std::runtime_error("$.seeds: expected integers");
            cfg.seeds.push_back(s.get<std::uint64_t>());
        }
    }
    if (j.contains("pipelines")) {
        if (!j["pipelines"].is_array() || j["pipelines"].empty())
            throw std::runtime_error("$.pipelines: expected a non-empty array");
        cfg.pipelines.clear();
        for (const auto& p : j["pipelines"]) {
            if (!p.is_string()) throw std::runtime_error("$.pipelines: expected strings");
            auto name = pipeline_name_from_string(p.get<std::string>());
            if (!name)
                throw std::runtime_error("$.pipelines: unknown pipeline \"" +
                                         p.get<std::string>() + "\"");
            cfg.pipelines.push_back(*name);
        }
    }
    if (j.contains("pipeline")) {
        const json& p = j["pipeline"];
        cfg.pipeline.refinement_rounds =
            static_cast<int>(opt_number(p, "refinement_rounds", cfg.pipeline.refinement_rounds));
        cfg.pipeline.min_anchors_for_fix =
            static_cast<int>(opt_number(p, "min_anchors_for_fix", cfg.pipeline.min_anchors_for_fix));
        if (cfg.pipeline.min_anchors_for_fix < 3)
            throw std::runtime_error("$.pipeline.min_anchors_for_fix: must be >= 3");
        cfg.pipeline.convergence_tol =
            opt_number(p, "convergence_tol", cfg.pipeline.convergence_tol);
        cfg.pipeline.spring.step = opt_number(p, "spring_step", cfg.pipeline.spring.step);
        cfg.pipeline.spring.decay = opt_number(p, "spring_decay", cfg.pipeline.spring.decay);
        cfg.pipeline.spring.rounds =
            static_cast<int>(opt_number(p, "spring_rounds", cfg.pipeline.spring.rounds));
    }
    if (j.contains("metrics")) {
        const json& m = j["metrics"];
        cfg.metrics.c1_max_dist_factor =
            opt_number(m, "c1_max_dist_factor", cfg.metrics.c1_max_dist_factor);
        cfg.metrics.c2_min_dist_factor =
            opt_number(m, "c2_min_dist_factor", cfg.metrics.c2_min_dist_factor);
        cfg.metrics.fold_far_factor = opt_number(m, "fold_far_factor", cfg.metrics.fold_far_factor);
        cfg.metrics.fold_near_factor =
            opt_number(m, "fold_near_factor", cfg.metrics.fold_near_factor);
    }
    if (j.contains("clustering")) {
        const json& c = j["clustering"];
        if (c.contains("enabled")) {
            if (!c["enabled"].is_boolean())
                throw std::runtime_error("$.clustering.enabled: expected a boolean");
            cfg.clustering.enabled = c["enabled"].get<bool>();
        }
        auto& params = cfg.clustering.params;
        params.boundary.hop_horizon =
            static_cast<int>(opt_number(c, "hop_horizon", params.boundary.hop_horizon));
        params.boundary.degree_fraction =
            opt_number(c, "degree_fraction", params.boundary.degree_fraction);
        params.side_horizon = static_cast<int>(opt_number(c, "side_horizon", params.side_horizon));
        params.min_cluster_size = static_cast<std::size_t>(
            opt_number(c, "min_cluster_size", static_cast<double>(params.min_cluster_size)));
    }
    if (j.contains("routing")) {
        const json& r = j["routing"];
        cfg.routing.sample_pairs =
            static_cast<int>(opt_number(r, "sample_pairs", cfg.routing.sample_pairs));
        cfg.routing.delivery_radius_factor =
            opt_number(r, "delivery_radius_factor", cfg.routing.delivery_radius_factor);
        cfg.routing.audit_factor = opt_number(r, "audit_factor", cfg.routing.audit_factor);
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            throw std::runtime_error("$.output_dir: expected a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    return cfg;
}

std::string summary_csv(const std::vector<RunRecord>& rows) {
    std::ostringstream out;
    out << "pipeline,seed,nodes,anchors,positioned,unpositioned,c1_violations,c2_violations,"
           "fold_pairs,rms_error,greedy_attempts,greedy_delivered,greedy_mislocated,greedy_rate,"
           "cluster_attempts,cluster_delivered,cluster_rate\n";
    for (const auto& r : rows) {
        out << pipeline_name_string(r.pipeline) << ',' << r.seed << ',' << r.nodes << ','
            << r.anchors << ',' << r.positioned << ',' << (r.nodes - r.positioned) << ','
            << r.c1_violations << ',' << r.c2_violations << ',' << r.fold_pairs << ','
            << g6(r.rms_error) << ',' << r.greedy_attempts << ',' << r.greedy_delivered << ','
            << r.greedy_mislocated << ',' << g6(r.greedy_rate()) << ',' << r.cluster_attempts
            << ',' << r.cluster_delivered << ',' << g6(r.cluster_rate()) << '\n';
    }
    return out.str();
}

RunSummary run_experiment(const ExperimentConfig& config) {
    RunSummary summary;
    const fs::path out_dir = config.output_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error(out_dir.string() + ": cannot create output directory");

    std::ostringstream violations;
    violations << "run,kind,node_a,node_b,placed_dist,true_dist\n";

    for (const std::uint64_t seed : config.seeds) {
        DeploymentSpec spec = config.deployment;
        spec.seed = seed;
        const NetworkInstance instance = generate_network(spec);
        const RangingTable ranging =
            measure_distances(instance, config.noise_stddev_fraction, mix_seed(seed, 0x6d736e73u));

        const fs::path seed_dir = out_dir / ("seed_" + std::to_string(seed));
        fs::create_directories(seed_dir, ec);
        if (ec) throw std::runtime_error(seed_dir.string() + ": cannot create directory");
        write_text_file((seed_dir / "instance.json").string(), instance_to_json(instance).dump(1));

        const auto pairs =
            sample_pairs(instance.node_count(), config.routing.sample_pairs, seed);
        const double delivery_radius =
            config.routing.delivery_radius_factor * instance.comm_radius;

        // Cluster artifacts and placement-independent cluster routing.
        std::size_t cluster_attempts = 0, cluster_delivered = 0;
        if (config.clustering.enabled) {
            const BoundaryInfo boundary =
                detect_boundary(instance.graph, config.clustering.params.boundary);
            const Clustering clustering =
                build_clusters(instance.graph, boundary, config.clustering.params);
            ClusterGraph cg = build_cluster_graph(clustering, instance.graph,
                                                  ClusterGraphVariant::cluster_per_vertex);
            // Synthetic per-node radio state: deterministic, seed-derived.
            std::vector<NodeAttrs> attrs(instance.node_count());
            Rng attr_rng(mix_seed(seed, 0x61747472u));
            for (auto& a : attrs) {
                a.residual_energy = attr_rng.uniform(0.2, 1.0);
                a.bandwidth = attr_rng.uniform(250e3, 1e6);
            }
            annotate_edges(cg, clustering, instance.graph, attrs);

            write_text_file((seed_dir / "clusters.json").string(),
                            clustering_to_json(clustering).dump(1));
            write_text_file((seed_dir / "cluster_graph.json").string(),
                            cluster_graph_to_json(cg).dump());
            write_text_file((seed_dir / "cluster_graph.dot").string(), to_graphviz(cg));
            const std::string cg_svg = render_cluster_graph_svg(
                instance, clustering, cg, "cluster graph, seed " + std::to_string(seed));
            const fs::path cg_svg_path = seed_dir / "cluster_graph.svg";
            write_text_file(cg_svg_path.string(), cg_svg);
            summary.figures.push_back(cg_svg_path.string());

            std::ostringstream routes;
            for (const auto& [src, dst] : pairs) {
                const ClusterId cs = clustering.assignment[src];
                const ClusterId cd = clustering.assignment[dst];
                ++cluster_attempts;
                RouteResult rr;
                ClusterRoute route = cluster_route(cg, cs, cd, RouteWeight::hops);
                if (route.found)
                    rr = expand_cluster_path(route.cluster_path, clustering, instance.graph, src,
                                             dst);
                if (rr.outcome == RouteOutcome::delivered) ++cluster_delivered;
                json line;
                line["src"] = src;
                line["dst"] = dst;
                line["outcome"] = route_outcome_string(rr.outcome);
                line["hops"] = rr.hop_count;
                line["clusters"] = route.found ? json(route.cluster_path) : json::array();
                routes << line.dump() << '\n';
            }
            write_text_file((seed_dir / "routes_cluster.jsonl").string(), routes.str());
        }

        for (const PipelineName name : config.pipelines) {
            const auto t0 = std::chrono::steady_clock::now();
            const Placement placement = run_pipeline(name, instance, ranging, config.pipeline);
            const ConsistencyReport report =
                evaluate_placement(placement, instance, config.metrics);

            RunRecord rec;
            rec.pipeline = name;
            rec.seed = seed;
            rec.nodes = instance.node_count();
            rec.anchors = instance.anchors.size();
            rec.positioned = report.positioned;
            rec.c1_violations = report.c1_violations.size();
            rec.c2_violations = report.c2_violations.size();
            rec.fold_pairs = report.fold_pairs.size();
            rec.rms_error = report.rms_error;
            rec.cluster_attempts = cluster_attempts;
            rec.cluster_delivered = cluster_delivered;

            const std::string base = pipeline_name_string(name);
            write_text_file((seed_dir / ("placement_" + base + ".json")).string(),
                            placement_to_json(placement).dump(1));
            write_text_file((seed_dir / ("report_" + base + ".json")).string(),
                            report_to_json(report, config.metrics).dump(1));
            const std::string svg = render_placement_svg(
                instance, placement, report,
                base + ", seed " + std::to_string(seed) +
                    (placement.frame == Frame::virtual_frame ? " (virtual frame)" : ""));
            const fs::path svg_path = seed_dir / ("placement_" + base + ".svg");
            write_text_file(svg_path.string(), svg);
            summary.figures.push_back(svg_path.string());

            std::ostringstream routes;
            for (const auto& [src, dst] : pairs) {
                ++rec.greedy_attempts;
                const RouteResult rr = greedy_geo_route(
                    placement, instance.graph, src, instance.positions[dst], delivery_radius,
                    &instance, config.routing.audit_factor);
                if (rr.outcome == RouteOutcome::delivered) {
                    ++rec.greedy_delivered;
                    if (rr.mislocated) ++rec.greedy_mislocated;
                }
                json line;
                line["src"] = src;
                line["dst"] = dst;
                line["outcome"] = route_outcome_string(rr.outcome);
                line["hops"] = rr.hop_count;
                line["mislocated"] = rr.mislocated;
                if (rr.stuck_node) line["stuck_node"] = *rr.stuck_node;
                routes << line.dump() << '\n';
            }
            write_text_file((seed_dir / ("routes_" + base + ".jsonl")).string(), routes.str());

            for (const auto& v : report.c1_violations)
                violations << base << ':' << seed << ",c1," << v.a << ',' << v.b << ','
                           << g6(v.placed_dist) << ",\n";
            for (const auto& v : report.c2_violations)
                violations << base << ':' << seed << ",c2," << v.a << ',' << v.b << ','
                           << g6(v.placed_dist) << ",\n";
            for (const auto& f : report.fold_pairs)
                violations << base << ':' << seed << ",fold," << f.a << ',' << f.b << ','
                           << g6(f.placed_dist) << ',' << g6(f.true_dist) << '\n';

            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            summary.rows.push_back(std::move(rec));
        }
    }

    summary.summary_csv_path = (out_dir / "summary.csv").string();
    write_text_file(summary.summary_csv_path, summary_csv(summary.rows));
    summary.violations_csv_path = (out_dir / "violations.csv").string();
    write_text_file(summary.violations_csv_path, violations.str());

    json manifest;
    manifest["format"] = "locfree-manifest/1";
    manifest["figures"] = summary.figures;
    summary.manifest_path = (out_dir / "manifest.json").string();
    write_text_file(summary.manifest_path, manifest.dump(1));
    return summary;
}

}  // namespace locfree
