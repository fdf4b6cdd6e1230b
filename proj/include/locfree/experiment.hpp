#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "locfree/clustergraph.hpp"
#include "locfree/georouting.hpp"
#include "locfree/localization.hpp"
#include "locfree/metrics.hpp"
#include "locfree/netgen.hpp"

namespace locfree {

struct ClusteringConfig {
    bool enabled = true;
    ClusterParams params;
};

struct RoutingConfig {
    int sample_pairs = 200;
    double delivery_radius_factor = 1.0;  // of comm_radius
    double audit_factor = 2.0;            // mislocation threshold, of delivery radius
};

struct ExperimentConfig {
    DeploymentSpec deployment;
    double noise_stddev_fraction = 0.01;
    std::vector<std::uint64_t> seeds{1};
    std::vector<PipelineName> pipelines{
        PipelineName::adhoc_positioning, PipelineName::robust_positioning,
        PipelineName::nhop_multilateration, PipelineName::afl};
    PipelineConfig pipeline;
    MetricsParams metrics;
    ClusteringConfig clustering;
    RoutingConfig routing;
    std::string output_dir = "out";
};

/// Parses a "locfree-experiment/1" document. A "deployment_file" member is
/// resolved relative to base_dir; an inline "deployment" object wins when
/// both are present.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::string& base_dir);

struct RunRecord {
    PipelineName pipeline;
    std::uint64_t seed = 0;
    std::size_t nodes = 0;
    std::size_t anchors = 0;
    std::size_t positioned = 0;
    std::size_t c1_violations = 0;
    std::size_t c2_violations = 0;
    std::size_t fold_pairs = 0;
    double rms_error = 0;
    std::size_t greedy_attempts = 0;
    std::size_t greedy_delivered = 0;   // placed-coordinate delivery
    std::size_t greedy_mislocated = 0;  // delivered but far off in truth
    std::size_t cluster_attempts = 0;
    std::size_t cluster_delivered = 0;
    double wall_seconds = 0;  // stdout only, never serialized

    double greedy_rate() const {
        return greedy_attempts
                   ? static_cast<double>(greedy_delivered - greedy_mislocated) / greedy_attempts
                   : 0.0;
    }
    double cluster_rate() const {
        return cluster_attempts ? static_cast<double>(cluster_delivered) / cluster_attempts : 0.0;
    }
};

struct RunSummary {
    std::vector<RunRecord> rows;
    std::vector<std::string> figures;   // manifest contents
    std::string summary_csv_path;
    std::string violations_csv_path;
    std::string manifest_path;
};

/// Full sweep: per (seed, pipeline) generate, measure, localize, evaluate,
/// route, and emit placement/report JSON + SVG; per seed cluster artifacts
/// and an instance JSON; summary.csv / violations.csv / manifest.json at
/// the top. All outputs are deterministic for a given config.
RunSummary run_experiment(const ExperimentConfig& config);

std::string summary_csv(const std::vector<RunRecord>& rows);

}  // namespace locfree
