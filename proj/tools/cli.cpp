#include "cli.hpp"

#include <cstdint>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "uavr/errors.hpp"
#include "uavr/experiment.hpp"
#include "uavr/io.hpp"
#include "uavr/ordering.hpp"
#include "uavr/sched.hpp"

namespace uavr::cli {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoFailure: return kIoFailure;
    case ErrorKind::InstanceTooLarge: return kTooLarge;
    default: return kInvalidInput;
  }
}

void write_output(const std::string& path, const Json& doc) {
  if (path == "-") {
    std::cout << dump_json(doc);
  } else {
    write_json_file(path, doc);
  }
}

struct GenNetworkArgs {
  std::string params;
  std::uint64_t seed = 0;
  std::string out;
};

int gen_network(const GenNetworkArgs& a) {
  const NetworkParams params = a.params.empty() ? NetworkParams{} : network_params_from_json(read_json_file(a.params));
  const UavNetwork net = generate_network(params, a.seed);
  write_output(a.out, network_to_json(params, net));
  std::size_t links = 0;
  for (const auto& adj : net.links) links += adj.size();
  std::cerr << "network: " << net.size() << " UAVs, " << links / 2 << " links -> " << a.out << "\n";
  return kOk;
}

struct GenInstanceArgs {
  std::string network;
  std::optional<std::size_t> flows;
  std::optional<std::size_t> retired;
  std::optional<std::uint64_t> seed;
  double tau_del_ms = 5.0, tau_ins_ms = 5.0, tau_mod_ms = 10.0;
  std::string out;
  std::string scenario_out;
};

int gen_instance(const GenInstanceArgs& a) {
  NetworkDocument doc = network_from_json(read_json_file(a.network));
  const RuleTimings timings = RuleTimings::from_ms(a.tau_del_ms, a.tau_ins_ms, a.tau_mod_ms);
  if (a.flows || a.retired) {
    if (!a.flows || !a.retired || !a.seed) {
      std::cerr << "gen-instance: --flows, --retired and --seed must be given together\n";
      return kInvalidInput;
    }
    doc.scenario = sample_scenario(doc.network, *a.flows, *a.retired, *a.seed);
  } else if (doc.scenario.retired.empty()) {
    std::cerr << "gen-instance: network file has no scenario; pass --flows, --retired and --seed\n";
    return kInvalidInput;
  }
  const BuiltInstance built = build_instance(doc.scenario.flows, retiring_uavs(doc.network, doc.scenario.retired), timings);
  write_output(a.out, instance_to_json(built));
  if (!a.scenario_out.empty()) write_json_file(a.scenario_out, network_to_json(doc.params, doc.network, doc.scenario));
  std::cerr << "instance: n = " << built.instance.n() << " flows, m = " << built.instance.m() << " UAVs -> " << a.out << "\n";
  return kOk;
}

struct ScheduleArgs {
  std::string instance;
  std::string method = "heuristic";
  std::optional<std::uint64_t> seed;
  std::size_t exact_cap = kDefaultExactCap;
  bool no_timing = false;
  std::string out = "-";
};

int schedule(const ScheduleArgs& a) {
  const auto method = parse_method(a.method);
  if (!method) {
    std::cerr << "schedule: unknown method '" << a.method << "'\n";
    return kInvalidInput;
  }
  if (*method == Method::Random && !a.seed) {
    std::cerr << "schedule: --method random requires --seed\n";
    return kInvalidInput;
  }
  const ReplacementInstance instance = instance_from_json(read_json_file(a.instance));
  const SolverResult result = solve(instance, *method, a.seed.value_or(0), a.exact_cap);
  Json doc = solver_result_to_json(result);
  if (a.no_timing) doc["wall_time_s"] = 0.0;
  write_output(a.out, doc);
  std::cerr << method_name(*method) << ": " << result.energy() << " J\n";
  return kOk;
}

struct ExportArgs {
  std::string instance;
  std::string out;
};

int export_ilp(const ExportArgs& a) {
  const IlpModel model = build_ilp(instance_from_json(read_json_file(a.instance)));
  if (a.out == "-") {
    write_lp(model, std::cout);
  } else {
    export_lp(model, a.out);
  }
  std::cerr << "ILP: " << model.variable_count() << " binaries, " << model.triples.size() << " transitivity rows -> " << a.out << "\n";
  return kOk;
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::size_t> threads;
  std::string csv;
  std::string svg_energy;
  std::string svg_runtime;
  bool no_timing = false;
};

int experiment(const ExperimentArgs& a, const std::atomic<bool>* cancel) {
  ExperimentConfig config = config_from_json(read_json_file(a.config));
  if (a.threads) config.threads = *a.threads;
  if (!a.csv.empty()) config.csv_out = a.csv;
  if (!a.svg_energy.empty()) config.svg_energy_out = a.svg_energy;
  if (!a.svg_runtime.empty()) config.svg_runtime_out = a.svg_runtime;
  if (a.no_timing) config.measure_runtime = false;
  if (config.csv_out.empty()) {
    std::cerr << "experiment: no CSV destination (csv_out or --csv)\n";
    return kInvalidInput;
  }
  const McmcResult result = run_experiment(config, cancel);
  const auto rows = summary_rows(result);
  if (!result.complete) {
    const std::string partial = config.csv_out + ".incomplete";
    write_csv(rows, partial);
    std::cerr << "experiment interrupted; partial results in " << partial << "\n";
    return kInterrupted;
  }
  write_csv(rows, config.csv_out);
  if (!config.svg_energy_out.empty() && !rows.empty()) emit_svg(rows, Metric::Energy, config.svg_energy_out);
  if (!config.svg_runtime_out.empty() && !rows.empty()) emit_svg(rows, Metric::Runtime, config.svg_runtime_out);
  std::cerr << "experiment: " << rows.size() << " rows -> " << config.csv_out << "\n";
  return kOk;
}

struct PlotArgs {
  std::string csv;
  std::string metric = "energy";
  std::string out;
};

int plot(const PlotArgs& a) {
  const auto rows = read_csv(a.csv);
  if (rows.empty()) {
    std::cerr << "plot: " << a.csv << " has no rows\n";
    return kInvalidInput;
  }
  emit_svg(rows, a.metric == "runtime" ? Metric::Runtime : Metric::Energy, a.out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, const std::atomic<bool>* cancel) {
  CLI::App app{"Energy-aware handover scheduling for UAV replacement"};
  app.require_subcommand(1);

  GenNetworkArgs gn;
  auto* gen_net_cmd = app.add_subcommand("gen-network", "Sample a random UAV network");
  gen_net_cmd->add_option("--params", gn.params, "Network parameter JSON (defaults if omitted)")->check(CLI::ExistingFile);
  gen_net_cmd->add_option("--seed", gn.seed, "RNG seed")->required();
  gen_net_cmd->add_option("--out", gn.out, "Network JSON destination ('-' for stdout)")->required();

  GenInstanceArgs gi;
  auto* gen_inst_cmd = app.add_subcommand("gen-instance", "Build an abstract instance from a network file");
  gen_inst_cmd->add_option("--network", gi.network, "Network JSON")->required()->check(CLI::ExistingFile);
  gen_inst_cmd->add_option("--flows", gi.flows, "Number of flows N_f to sample");
  gen_inst_cmd->add_option("--retired", gi.retired, "Number of retired UAVs m to sample");
  gen_inst_cmd->add_option("--seed", gi.seed, "RNG seed for sampling");
  gen_inst_cmd->add_option("--tau-del-ms", gi.tau_del_ms, "Rule delete latency (ms)");
  gen_inst_cmd->add_option("--tau-ins-ms", gi.tau_ins_ms, "Rule insert latency (ms)");
  gen_inst_cmd->add_option("--tau-mod-ms", gi.tau_mod_ms, "Rule modify latency (ms)");
  gen_inst_cmd->add_option("--out", gi.out, "Instance JSON destination ('-' for stdout)")->required();
  gen_inst_cmd->add_option("--scenario-out", gi.scenario_out, "Also write the network with its sampled scenario");

  ScheduleArgs sc;
  auto* sched_cmd = app.add_subcommand("schedule", "Compute a handover schedule");
  sched_cmd->add_option("--instance", sc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  sched_cmd->add_option("--method", sc.method, "heuristic | random | exact | bruteforce");
  sched_cmd->add_option("--seed", sc.seed, "RNG seed (random method)");
  sched_cmd->add_option("--exact-cap", sc.exact_cap, "Largest n accepted by the exact solver");
  sched_cmd->add_flag("--no-timing", sc.no_timing, "Report wall time as 0 for reproducible output");
  sched_cmd->add_option("--out", sc.out, "Result JSON destination ('-' for stdout)");

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export-ilp", "Write the ordering ILP in LP format");
  export_cmd->add_option("--instance", ex.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", ex.out, "LP destination ('-' for stdout)")->required();

  ExperimentArgs ea;
  auto* exp_cmd = app.add_subcommand("experiment", "Run the Monte Carlo comparison");
  exp_cmd->add_option("--config", ea.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("--threads", ea.threads, "Worker threads (results do not depend on it)");
  exp_cmd->add_option("--csv", ea.csv, "Override csv_out");
  exp_cmd->add_option("--svg-energy", ea.svg_energy, "Override svg_energy_out");
  exp_cmd->add_option("--svg-runtime", ea.svg_runtime, "Override svg_runtime_out");
  exp_cmd->add_flag("--no-timing", ea.no_timing, "Record runtimes as 0 for reproducible output");

  PlotArgs pa;
  auto* plot_cmd = app.add_subcommand("plot", "Render an experiment CSV as SVG");
  plot_cmd->add_option("--csv", pa.csv, "Experiment CSV")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--metric", pa.metric, "energy | runtime")->check(CLI::IsMember({"energy", "runtime"}));
  plot_cmd->add_option("--out", pa.out, "SVG destination")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kInvalidInput;
  }

  try {
    if (*gen_net_cmd) return gen_network(gn);
    if (*gen_inst_cmd) return gen_instance(gi);
    if (*sched_cmd) return schedule(sc);
    if (*export_cmd) return export_ilp(ex);
    if (*exp_cmd) return experiment(ea, cancel);
    if (*plot_cmd) return plot(pa);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace uavr::cli
