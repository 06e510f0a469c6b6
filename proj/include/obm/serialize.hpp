#pragma once

#include <json.hpp>

#include "obm/estimate.hpp"
#include "obm/harness.hpp"
#include "obm/model.hpp"
#include "obm/stats.hpp"

namespace obm {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ModelParams& p);
/// Missing keys keep their defaults; sigma_plus and sigma_minus are required.
/// Throws Error(ParseError) on wrong types.
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PathStats& s);
nlohmann::json to_json(const DriftEstimate& e);
nlohmann::json to_json(const WilkResult& w);
nlohmann::json to_json(const ConfidenceIntervals& ci);
nlohmann::json to_json(const ExperimentConfig& c);
/// Per-replication arrays use null for undefined estimates. Runtime fields
/// (elapsed time, thread count) are left out unless include_runtime is set,
/// so that the document is a pure function of the configuration.
nlohmann::json to_json(const ExperimentResult& r, bool include_runtime = false);

/// Reads an ExperimentConfig from a JSON object with keys params, T, N,
/// substeps, replications, seed, scenario and optional kde_bandwidth.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Pretty-printed; doubles use the shortest round-trip representation.
std::string dump(const nlohmann::json& j);

}  // namespace obm
