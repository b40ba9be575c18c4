#pragma once

// JSON file formats.
//
// Instance:  { "timings": {"tau_del_ms":5,"tau_ins_ms":5,"tau_mod_ms":10},
//              "flows": [{"id":0,"t_ms":40,"delta":[0,1,2]}, ...],
//              "uavs":  [{"id":0,"p_watts":100.0}, ...] }
//            Each flow needs t_ms or rule_counts {"del","ins","mod"} (or both).
// Network:   { "params": {...}, "uavs": [{"id","x","y","mass_kg"}],
//              "retired": [ids], "flows": [{"id","route":[ids]}] }
// Config:    field names of ExperimentConfig; every field optional.

#include <string>

#include <json.hpp>

#include "uavr/experiment.hpp"
#include "uavr/model.hpp"
#include "uavr/netgen.hpp"
#include "uavr/sched.hpp"

namespace uavr {

using Json = nlohmann::ordered_json;

/// Throws IoFailure if unreadable, SchemaViolation (with line/column) if malformed.
Json read_json_file(const std::string& path);
/// Two-space indent plus trailing newline.
void write_json_file(const std::string& path, const Json& doc);
std::string dump_json(const Json& doc);

Json timings_to_json(const RuleTimings& timings);
RuleTimings timings_from_json(const Json& j);

Json instance_to_json(const ReplacementInstance& instance);
/// Adds "origin" ids to flows and UAVs for traceability back to the network.
Json instance_to_json(const BuiltInstance& built);
ReplacementInstance instance_from_json(const Json& j);

Json network_params_to_json(const NetworkParams& params);
NetworkParams network_params_from_json(const Json& j);

struct NetworkDocument {
  NetworkParams params;
  UavNetwork network;
  /// Empty when the file carries no scenario.
  Scenario scenario;
};

Json network_to_json(const NetworkParams& params, const UavNetwork& net, const Scenario& scenario = {});
NetworkDocument network_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

Json solver_result_to_json(const SolverResult& result);

}  // namespace uavr
