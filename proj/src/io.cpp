#include "uavr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <type_traits>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "uavr/errors.hpp"

namespace uavr {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::SchemaViolation, what); }

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) schema(std::string(what) + " must be an object");
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const char* what) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      schema(std::string("unknown field '") + key + "' in " + what);
    }
  }
}

double number_at(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) schema(std::string(what) + " lacks '" + key + "'");
  if (!it->is_number()) schema(std::string(what) + "." + key + " must be a number");
  return it->get<double>();
}

std::size_t index_at(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) schema(std::string(what) + " lacks '" + key + "'");
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    schema(std::string(what) + "." + key + " must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

std::vector<std::size_t> index_list(const Json& j, const char* what) {
  if (!j.is_array()) schema(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) schema(std::string(what) + " entries must be non-negative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

template <typename T>
void optional_field(const Json& j, const char* key, T& target, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  // nlohmann converts -1 or 2.5 to an unsigned integer silently.
  const auto natural = [](const Json& v) { return v.is_number_integer() && v.template get<std::int64_t>() >= 0; };
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!natural(*it)) schema(std::string(what) + "." + key + " must be a non-negative integer");
  } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
    if (!it->is_array() || !std::all_of(it->begin(), it->end(), natural)) {
      schema(std::string(what) + "." + key + " must be a list of non-negative integers");
    }
  }
  try {
    target = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    schema(std::string(what) + "." + key + " has the wrong type");
  }
}

void optional_number(const Json& j, const char* key, double& target, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number()) schema(std::string(what) + "." + key + " must be a number");
  target = it->get<double>();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SchemaViolation, path + ": " + e.what());
  }
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
  out << dump_json(doc);
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + path);
}

Json timings_to_json(const RuleTimings& t) {
  return Json{{"tau_del_ms", t.tau_del * 1000.0}, {"tau_ins_ms", t.tau_ins * 1000.0}, {"tau_mod_ms", t.tau_mod * 1000.0}};
}

RuleTimings timings_from_json(const Json& j) {
  require_object(j, "timings");
  reject_unknown(j, {"tau_del_ms", "tau_ins_ms", "tau_mod_ms"}, "timings");
  double del = 5.0, ins = 5.0, mod = 10.0;
  optional_number(j, "tau_del_ms", del, "timings");
  optional_number(j, "tau_ins_ms", ins, "timings");
  optional_number(j, "tau_mod_ms", mod, "timings");
  try {
    return RuleTimings::from_ms(del, ins, mod);
  } catch (const Error& e) {
    schema(e.what());
  }
}

namespace {

Json flow_json(const FlowSpec& f) {
  Json j{{"id", f.id}, {"t_ms", f.handover_time * 1000.0}};
  if (f.rule_counts) j["rule_counts"] = Json{{"del", f.rule_counts->r_del}, {"ins", f.rule_counts->r_ins}, {"mod", f.rule_counts->r_mod}};
  j["delta"] = f.retired_set;
  return j;
}

}  // namespace

Json instance_to_json(const ReplacementInstance& instance) {
  Json flows = Json::array();
  for (const auto& f : instance.flows()) flows.push_back(flow_json(f));
  Json uavs = Json::array();
  for (const auto& u : instance.uavs()) uavs.push_back(Json{{"id", u.id}, {"p_watts", u.hover_power}});
  return Json{{"timings", timings_to_json(instance.timings())}, {"flows", std::move(flows)}, {"uavs", std::move(uavs)}};
}

Json instance_to_json(const BuiltInstance& built) {
  Json j = instance_to_json(built.instance);
  for (std::size_t i = 0; i < built.flow_origin.size(); ++i) j["flows"][i]["origin"] = built.flow_origin[i];
  for (std::size_t u = 0; u < built.uav_origin.size(); ++u) j["uavs"][u]["origin"] = built.uav_origin[u];
  return j;
}

ReplacementInstance instance_from_json(const Json& j) {
  require_object(j, "instance");
  reject_unknown(j, {"timings", "flows", "uavs"}, "instance");
  const RuleTimings timings = j.contains("timings") ? timings_from_json(j["timings"]) : RuleTimings{};
  if (!j.contains("flows") || !j["flows"].is_array()) schema("instance needs a 'flows' array");
  if (!j.contains("uavs") || !j["uavs"].is_array()) schema("instance needs a 'uavs' array");

  std::vector<RetiredUav> uavs;
  for (const auto& u : j["uavs"]) {
    require_object(u, "uav");
    reject_unknown(u, {"id", "p_watts", "origin"}, "uav");
    uavs.push_back(RetiredUav{index_at(u, "id", "uav"), number_at(u, "p_watts", "uav"), {}});
  }
  std::sort(uavs.begin(), uavs.end(), [](const RetiredUav& a, const RetiredUav& b) { return a.id < b.id; });

  std::vector<FlowSpec> flows;
  for (const auto& f : j["flows"]) {
    require_object(f, "flow");
    reject_unknown(f, {"id", "t_ms", "rule_counts", "delta", "origin"}, "flow");
    FlowSpec spec;
    spec.id = index_at(f, "id", "flow");
    if (!f.contains("delta")) schema("flow " + std::to_string(spec.id) + " lacks 'delta'");
    spec.retired_set = index_list(f["delta"], "flow.delta");
    if (f.contains("rule_counts")) {
      const Json& rc = f["rule_counts"];
      require_object(rc, "rule_counts");
      reject_unknown(rc, {"del", "ins", "mod"}, "rule_counts");
      RuleCounts counts;
      counts.r_del = static_cast<int>(index_at(rc, "del", "rule_counts"));
      counts.r_ins = static_cast<int>(index_at(rc, "ins", "rule_counts"));
      counts.r_mod = static_cast<int>(index_at(rc, "mod", "rule_counts"));
      spec.rule_counts = counts;
      spec.handover_time = handover_time(counts, timings);
    }
    // Rule counts are authoritative when both are given; t_ms must then agree.
    if (f.contains("t_ms")) {
      const double t = number_at(f, "t_ms", "flow") / 1000.0;
      if (!spec.rule_counts) {
        spec.handover_time = t;
      } else if (std::abs(t - spec.handover_time) > 1e-9 * std::max(1.0, spec.handover_time)) {
        schema("flow " + std::to_string(spec.id) + ": t_ms disagrees with rule_counts");
      }
    } else if (!spec.rule_counts) {
      schema("flow " + std::to_string(spec.id) + " needs 't_ms' or 'rule_counts'");
    }
    flows.push_back(std::move(spec));
  }
  std::sort(flows.begin(), flows.end(), [](const FlowSpec& a, const FlowSpec& b) { return a.id < b.id; });
  try {
    return ReplacementInstance(std::move(flows), std::move(uavs), timings);
  } catch (const Error& e) {
    schema(e.what());
  }
}

Json network_params_to_json(const NetworkParams& p) {
  return Json{{"num_uavs", p.num_uavs},
              {"area_side", p.area_side},
              {"common_altitude", p.common_altitude},
              {"mass_choices", p.mass_choices},
              {"radio",
               {{"carrier_freq", p.radio.carrier_freq},
                {"light_speed", p.radio.light_speed},
                {"tx_power", p.radio.tx_power},
                {"noise_power", p.radio.noise_power},
                {"snr_threshold", p.radio.snr_threshold}}},
              {"hover",
               {{"gravity", p.hover.gravity},
                {"prop_radius", p.hover.prop_radius},
                {"num_props", p.hover.num_props},
                {"air_density", p.hover.air_density}}}};
}

NetworkParams network_params_from_json(const Json& j) {
  require_object(j, "params");
  reject_unknown(j, {"num_uavs", "area_side", "common_altitude", "mass_choices", "radio", "hover"}, "params");
  NetworkParams p;
  optional_field(j, "num_uavs", p.num_uavs, "params");
  optional_number(j, "area_side", p.area_side, "params");
  optional_number(j, "common_altitude", p.common_altitude, "params");
  optional_field(j, "mass_choices", p.mass_choices, "params");
  if (j.contains("radio")) {
    const Json& r = j["radio"];
    require_object(r, "radio");
    reject_unknown(r, {"carrier_freq", "light_speed", "tx_power", "noise_power", "snr_threshold"}, "radio");
    optional_number(r, "carrier_freq", p.radio.carrier_freq, "radio");
    optional_number(r, "light_speed", p.radio.light_speed, "radio");
    optional_number(r, "tx_power", p.radio.tx_power, "radio");
    optional_number(r, "noise_power", p.radio.noise_power, "radio");
    optional_number(r, "snr_threshold", p.radio.snr_threshold, "radio");
  }
  if (j.contains("hover")) {
    const Json& h = j["hover"];
    require_object(h, "hover");
    reject_unknown(h, {"gravity", "prop_radius", "num_props", "air_density"}, "hover");
    optional_number(h, "gravity", p.hover.gravity, "hover");
    optional_number(h, "prop_radius", p.hover.prop_radius, "hover");
    optional_field(h, "num_props", p.hover.num_props, "hover");
    optional_number(h, "air_density", p.hover.air_density, "hover");
  }
  return p;
}

Json network_to_json(const NetworkParams& params, const UavNetwork& net, const Scenario& scenario) {
  Json uavs = Json::array();
  for (std::size_t u = 0; u < net.size(); ++u) {
    uavs.push_back(Json{{"id", u}, {"x", net.positions[u].x}, {"y", net.positions[u].y}, {"mass_kg", net.masses[u]}});
  }
  Json flows = Json::array();
  for (const auto& f : scenario.flows) flows.push_back(Json{{"id", f.id}, {"route", f.route}});
  return Json{{"params", network_params_to_json(params)}, {"uavs", std::move(uavs)}, {"retired", scenario.retired}, {"flows", std::move(flows)}};
}

NetworkDocument network_from_json(const Json& j) {
  require_object(j, "network");
  reject_unknown(j, {"params", "uavs", "retired", "flows"}, "network");
  NetworkDocument doc;
  if (j.contains("params")) doc.params = network_params_from_json(j["params"]);
  if (!j.contains("uavs") || !j["uavs"].is_array()) schema("network needs a 'uavs' array");
  const std::size_t count = j["uavs"].size();
  std::vector<Position> positions(count);
  std::vector<double> masses(count);
  std::vector<bool> seen(count, false);
  for (const auto& u : j["uavs"]) {
    require_object(u, "uav");
    reject_unknown(u, {"id", "x", "y", "mass_kg"}, "uav");
    const std::size_t id = index_at(u, "id", "uav");
    if (id >= count || seen[id]) schema("network UAV ids must be dense 0..N_u-1");
    seen[id] = true;
    positions[id] = Position{number_at(u, "x", "uav"), number_at(u, "y", "uav")};
    masses[id] = number_at(u, "mass_kg", "uav");
    if (masses[id] < 0.0) schema("UAV mass must be non-negative");
  }
  doc.params.num_uavs = count;
  try {
    doc.params.validate();
  } catch (const Error& e) {
    schema(e.what());
  }
  doc.network = make_network(std::move(positions), std::move(masses), doc.params);
  if (j.contains("retired")) {
    doc.scenario.retired = index_list(j["retired"], "retired");
    for (std::size_t u : doc.scenario.retired) {
      if (u >= count) schema("retired id out of range");
    }
  }
  if (j.contains("flows")) {
    if (!j["flows"].is_array()) schema("'flows' must be an array");
    for (const auto& f : j["flows"]) {
      require_object(f, "flow");
      reject_unknown(f, {"id", "route"}, "flow");
      RoutedFlow rf{index_at(f, "id", "flow"), {}};
      if (!f.contains("route")) schema("flow lacks 'route'");
      rf.route = index_list(f["route"], "flow.route");
      if (rf.route.size() < 2) schema("flow route needs at least two nodes");
      for (std::size_t p = 0; p < rf.route.size(); ++p) {
        if (rf.route[p] >= count) schema("route node out of range");
        if (p > 0 && !doc.network.linked(rf.route[p - 1], rf.route[p])) {
          schema("route of flow " + std::to_string(rf.id) + " uses a missing link");
        }
      }
      doc.scenario.flows.push_back(std::move(rf));
    }
  }
  return doc;
}

Json config_to_json(const ExperimentConfig& c) {
  Json methods = Json::array();
  for (Method m : c.methods) methods.push_back(std::string(method_name(m)));
  return Json{{"network", network_params_to_json(c.network)},
              {"timings", timings_to_json(c.timings)},
              {"n_flows_list", c.n_flows_list},
              {"m_list", c.m_list},
              {"iterations", c.iterations},
              {"methods", std::move(methods)},
              {"exact_cap", c.exact_cap},
              {"master_seed", c.master_seed},
              {"resample_retired_per_iteration", c.resample_retired_per_iteration},
              {"threads", c.threads},
              {"measure_runtime", c.measure_runtime},
              {"csv_out", c.csv_out},
              {"svg_energy_out", c.svg_energy_out},
              {"svg_runtime_out", c.svg_runtime_out}};
}

ExperimentConfig config_from_json(const Json& j) {
  require_object(j, "config");
  reject_unknown(j,
                 {"network", "timings", "n_flows_list", "m_list", "iterations", "methods", "exact_cap", "master_seed",
                  "resample_retired_per_iteration", "threads", "measure_runtime", "csv_out", "svg_energy_out", "svg_runtime_out"},
                 "config");
  ExperimentConfig c;
  if (j.contains("network")) c.network = network_params_from_json(j["network"]);
  if (j.contains("timings")) c.timings = timings_from_json(j["timings"]);
  optional_field(j, "n_flows_list", c.n_flows_list, "config");
  optional_field(j, "m_list", c.m_list, "config");
  optional_field(j, "iterations", c.iterations, "config");
  if (j.contains("methods")) {
    std::vector<std::string> names;
    optional_field(j, "methods", names, "config");
    c.methods.clear();
    for (const auto& name : names) {
      const auto m = parse_method(name);
      if (!m || *m == Method::BruteForce) schema("unknown experiment method '" + name + "'");
      c.methods.push_back(*m);
    }
  }
  optional_field(j, "exact_cap", c.exact_cap, "config");
  optional_field(j, "master_seed", c.master_seed, "config");
  optional_field(j, "resample_retired_per_iteration", c.resample_retired_per_iteration, "config");
  optional_field(j, "threads", c.threads, "config");
  optional_field(j, "measure_runtime", c.measure_runtime, "config");
  optional_field(j, "csv_out", c.csv_out, "config");
  optional_field(j, "svg_energy_out", c.svg_energy_out, "config");
  optional_field(j, "svg_runtime_out", c.svg_runtime_out, "config");
  c.validate();
  return c;
}

Json solver_result_to_json(const SolverResult& result) {
  return Json{{"schedule", result.schedule().order},
              {"energy_j", result.energy()},
              {"method", std::string(method_name(result.method()))},
              {"wall_time_s", result.wall_time()}};
}

}  // namespace uavr
