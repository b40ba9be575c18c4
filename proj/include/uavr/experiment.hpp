#pragma once

// Monte Carlo comparison of schedulers over random flow sets, with
// mean / standard error / 95% interval summaries, CSV and SVG output.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "uavr/model.hpp"
#include "uavr/netgen.hpp"
#include "uavr/sched.hpp"

namespace uavr {

struct ExperimentConfig {
  NetworkParams network;
  RuleTimings timings;
  std::vector<std::size_t> n_flows_list{70, 100};
  std::vector<std::size_t> m_list{5, 6, 7, 8, 9, 10};
  std::size_t iterations = 200;
  std::vector<Method> methods{Method::Heuristic, Method::Random, Method::ExactDp};
  std::size_t exact_cap = kDefaultExactCap;
  std::uint64_t master_seed = 1;
  bool resample_retired_per_iteration = false;
  /// Worker threads for iterations; results do not depend on it.
  std::size_t threads = 1;
  /// When false every wall time is recorded as 0 so output is reproducible byte for byte.
  bool measure_runtime = true;
  std::string csv_out;
  std::string svg_energy_out;
  std::string svg_runtime_out;

  /// Throws ConfigInvalid.
  void validate() const;
};

struct Summary {
  double mean = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

inline constexpr double kConfidenceZ = 1.96;

/// Sample mean, standard error (1/√K)·s and mean ± 1.96·SE.
/// Throws TooFewSamples for fewer than two samples.
Summary summarize(const std::vector<double>& samples);

struct CellKey {
  std::size_t n_flows = 0;
  std::size_t m = 0;
  Method method = Method::Heuristic;

  friend auto operator<=>(const CellKey& a, const CellKey& b) {
    return std::tuple(a.n_flows, a.m, method_name(a.method)) <=> std::tuple(b.n_flows, b.m, method_name(b.method));
  }
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellResult {
  /// Per-iteration energies (J); iterations where the method was skipped are absent.
  std::vector<double> samples;
  std::vector<double> runtimes;
  /// Instance digest for each recorded sample, in the same order.
  std::vector<std::uint64_t> instance_hashes;
  /// Iteration index of each recorded sample.
  std::vector<std::size_t> iterations;
  std::size_t skipped = 0;
};

struct McmcResult {
  ExperimentConfig config;
  /// Ordered by (n_f, m, method name).
  std::map<CellKey, CellResult> cells;
  /// False if the run was cancelled before all iterations finished.
  bool complete = true;
};

/// Runs every (n_f, m) cell for config.iterations iterations. Setting *cancel
/// stops scheduling new iterations; finished ones are kept and the result is
/// marked incomplete.
McmcResult run_experiment(const ExperimentConfig& config, const std::atomic<bool>* cancel = nullptr);

/// One CSV row.
struct SummaryRow {
  std::size_t m = 0;
  std::size_t n_flows = 0;
  std::string method;
  std::size_t k = 0;
  double mean_energy = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_runtime = 0.0;
};

/// Cells with fewer than two samples are omitted.
std::vector<SummaryRow> summary_rows(const McmcResult& result);

inline constexpr const char* kCsvHeader = "m,n_f,method,k,mean_energy_j,se_j,ci_lo_j,ci_hi_j,mean_runtime_s";

std::string format_csv(const std::vector<SummaryRow>& rows);
void write_csv(const McmcResult& result, const std::string& path);
void write_csv(const std::vector<SummaryRow>& rows, const std::string& path);
/// Throws IoFailure or SchemaViolation.
std::vector<SummaryRow> read_csv(const std::string& path);
std::vector<SummaryRow> parse_csv(const std::string& text);

enum class Metric { Energy, Runtime };

/// Self-contained line chart: one series per (method, n_f), x = m,
/// y = mean, vertical error bars spanning the 95% interval.
/// Throws ConfigInvalid when `rows` is empty.
std::string render_svg(const std::vector<SummaryRow>& rows, Metric metric);
void emit_svg(const std::vector<SummaryRow>& rows, Metric metric, const std::string& path);
void emit_svg(const McmcResult& result, Metric metric, const std::string& path);

}  // namespace uavr
