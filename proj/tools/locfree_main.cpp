#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locfree/experiment.hpp"
#include "locfree/json_io.hpp"
#include "locfree/rng.hpp"
#include "locfree/svg_render.hpp"

namespace fs = std::filesystem;
using namespace locfree;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::vector<std::uint64_t>& seed_override,
            const std::vector<std::string>& pipeline_override) {
    ExperimentConfig cfg = experiment_config_from_json(
        load_json_file(config_path), fs::path(config_path).parent_path().string());
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (!seed_override.empty()) cfg.seeds = seed_override;
    if (!pipeline_override.empty()) {
        cfg.pipelines.clear();
        for (const auto& p : pipeline_override) {
            auto name = pipeline_name_from_string(p);
            if (!name) throw std::runtime_error("unknown pipeline \"" + p + "\"");
            cfg.pipelines.push_back(*name);
        }
    }
    const RunSummary summary = run_experiment(cfg);
    for (const auto& r : summary.rows) {
        std::printf("%-22s seed %-4llu positioned %5zu/%-5zu rms %-10.4g folds %-5zu "
                    "greedy %.3f cluster %.3f (%.2fs)\n",
                    pipeline_name_string(r.pipeline),
                    static_cast<unsigned long long>(r.seed), r.positioned, r.nodes, r.rms_error,
                    r.fold_pairs, r.greedy_rate(), r.cluster_rate(), r.wall_seconds);
    }
    std::printf("wrote %s\n", summary.summary_csv_path.c_str());
    return 0;
}

int cmd_plot(const std::string& placement_path, const std::string& instance_path,
             const std::string& out_path) {
    const NetworkInstance instance = instance_from_json(load_json_file(instance_path));
    const Placement placement = placement_from_json(load_json_file(placement_path));
    if (placement.coords.size() != instance.node_count())
        throw std::runtime_error("placement and instance node counts differ");
    const ConsistencyReport report = evaluate_placement(placement, instance);
    const std::string svg = render_placement_svg(instance, placement, report,
                                                 fs::path(placement_path).stem().string());
    write_text_file(out_path, svg);
    std::printf("wrote %s (positioned %zu/%zu, rms %.4g)\n", out_path.c_str(),
                report.positioned, instance.node_count(), report.rms_error);
    return 0;
}

int cmd_route(const std::string& instance_path, int pairs, const std::string& pipeline_name,
              double noise, std::uint64_t seed) {
    const NetworkInstance instance = instance_from_json(load_json_file(instance_path));
    auto name = pipeline_name_from_string(pipeline_name);
    if (!name) throw std::runtime_error("unknown pipeline \"" + pipeline_name + "\"");
    const RangingTable ranging = measure_distances(instance, noise, mix_seed(seed, 0x6d736e73u));
    const Placement placement = run_pipeline(*name, instance, ranging, PipelineConfig{});

    const BoundaryInfo boundary = detect_boundary(instance.graph);
    const Clustering clustering = build_clusters(instance.graph, boundary);
    ClusterGraph cg =
        build_cluster_graph(clustering, instance.graph, ClusterGraphVariant::cluster_per_vertex);
    std::vector<NodeAttrs> attrs(instance.node_count());
    Rng attr_rng(mix_seed(seed, 0x61747472u));
    for (auto& a : attrs) {
        a.residual_energy = attr_rng.uniform(0.2, 1.0);
        a.bandwidth = attr_rng.uniform(250e3, 1e6);
    }
    annotate_edges(cg, clustering, instance.graph, attrs);

    Rng rng(mix_seed(seed, 0x726f7574u));
    const std::size_t n = instance.node_count();
    std::size_t greedy_ok = 0, greedy_mis = 0, cluster_ok = 0;
    for (int i = 0; i < pairs; ++i) {
        const NodeId src = static_cast<NodeId>(rng.below(n));
        NodeId dst = static_cast<NodeId>(rng.below(n));
        while (dst == src) dst = static_cast<NodeId>(rng.below(n));

        const RouteResult g = greedy_geo_route(placement, instance.graph, src,
                                               instance.positions[dst], instance.comm_radius,
                                               &instance);
        if (g.outcome == RouteOutcome::delivered) {
            ++greedy_ok;
            if (g.mislocated) ++greedy_mis;
        }
        ClusterRoute route = cluster_route(cg, clustering.assignment[src],
                                           clustering.assignment[dst], RouteWeight::hops);
        if (route.found) {
            const RouteResult c =
                expand_cluster_path(route.cluster_path, clustering, instance.graph, src, dst);
            if (c.outcome == RouteOutcome::delivered) ++cluster_ok;
        }
    }
    std::printf("pipeline %s: %zu/%d greedy deliveries (%zu mislocated), %zu/%d cluster "
                "deliveries\n",
                pipeline_name.c_str(), greedy_ok, pairs, greedy_mis, cluster_ok, pairs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coordinate-free localization workbench"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    std::vector<std::uint64_t> seed_override;
    std::vector<std::string> pipeline_override;
    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment JSON")->required();
    run->add_option("--out", out_override, "override output directory");
    run->add_option("--seed", seed_override, "override seed list")->delimiter(',');
    run->add_option("--pipelines", pipeline_override, "override pipeline list")->delimiter(',');

    std::string placement_path, instance_path, svg_out = "placement.svg";
    CLI::App* plot = app.add_subcommand("plot", "render a stored placement");
    plot->add_option("placement", placement_path, "placement JSON")->required();
    plot->add_option("instance", instance_path, "instance JSON")->required();
    plot->add_option("--out", svg_out, "output SVG path");

    std::string route_instance, route_pipeline = "robust_positioning";
    int route_pairs = 100;
    double route_noise = 0.01;
    std::uint64_t route_seed = 1;
    CLI::App* route = app.add_subcommand("route", "compare greedy vs cluster routing");
    route->add_option("instance", route_instance, "instance JSON")->required();
    route->add_option("--pairs", route_pairs, "number of sampled source/target pairs");
    route->add_option("--pipeline", route_pipeline, "pipeline for the greedy placement");
    route->add_option("--noise", route_noise, "ranging noise stddev fraction");
    route->add_option("--seed", route_seed, "seed for noise and pair sampling");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, out_override, seed_override, pipeline_override);
        if (plot->parsed()) return cmd_plot(placement_path, instance_path, svg_out);
        if (route->parsed())
            return cmd_route(route_instance, route_pairs, route_pipeline, route_noise,
                             route_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
