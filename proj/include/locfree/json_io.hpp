#pragma once

#include <string>

#include <json.hpp>

#include "locfree/clustergraph.hpp"
#include "locfree/localization.hpp"
#include "locfree/metrics.hpp"
#include "locfree/netgen.hpp"

namespace locfree {

// Every document carries a "format" tag ("locfree-<kind>/1"); readers
// reject unknown tags. Semantic errors name the offending JSON path,
// parse errors the file line.

nlohmann::json deployment_to_json(const DeploymentSpec& spec);
DeploymentSpec deployment_from_json(const nlohmann::json& j);

/// The communication graph is not stored; loading rebuilds it from
/// positions and comm_radius, which reproduces it exactly.
nlohmann::json instance_to_json(const NetworkInstance& instance);
NetworkInstance instance_from_json(const nlohmann::json& j);

nlohmann::json placement_to_json(const Placement& placement);
Placement placement_from_json(const nlohmann::json& j);

nlohmann::json clustering_to_json(const Clustering& clustering);
Clustering clustering_from_json(const nlohmann::json& j);

/// Compact on purpose: vertices as [id, kind, node_count], edges as
/// [a, b, residual_energy, bandwidth, node_count] with attrs rounded to 6
/// significant digits.
nlohmann::json cluster_graph_to_json(const ClusterGraph& cg);
ClusterGraph cluster_graph_from_json(const nlohmann::json& j);

std::string to_graphviz(const ClusterGraph& cg);

nlohmann::json report_to_json(const ConsistencyReport& report, const MetricsParams& params);

/// Reads and parses; parse failures throw std::runtime_error with
/// "<path>:<line>: <reason>".
nlohmann::json load_json_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace locfree
