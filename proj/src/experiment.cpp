#include "uavr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "uavr/errors.hpp"
#include "uavr/rng.hpp"

namespace uavr {

namespace {

// Purpose tags folded into derived seeds.
constexpr std::uint64_t kTagNetwork = 0x6e6574;
constexpr std::uint64_t kTagRetired = 0x726574;
constexpr std::uint64_t kTagRandomSchedule = 0x726e64;

}  // namespace

void ExperimentConfig::validate() const {
  network.validate();
  timings.validate();
  const auto fail = [](const char* what) { throw Error(ErrorKind::ConfigInvalid, what); };
  if (iterations < 2) fail("iterations must be at least 2");
  if (methods.empty()) fail("method list must not be empty");
  if (n_flows_list.empty()) fail("n_flows_list must not be empty");
  if (m_list.empty()) fail("m_list must not be empty");
  for (std::size_t m : m_list) {
    if (m == 0 || m + 2 > network.num_uavs) fail("each m must be in 1..num_uavs-2");
  }
  if (threads == 0) fail("threads must be positive");
}

Summary summarize(const std::vector<double>& samples) {
  const std::size_t k = samples.size();
  if (k < 2) throw Error(ErrorKind::TooFewSamples, "need at least two samples, got " + std::to_string(k));
  Summary s;
  for (double e : samples) s.mean += e;
  s.mean /= static_cast<double>(k);
  double ss = 0.0;
  for (double e : samples) ss += (e - s.mean) * (e - s.mean);
  s.se = std::sqrt(ss / static_cast<double>(k - 1)) / std::sqrt(static_cast<double>(k));
  s.ci_lo = s.mean - kConfidenceZ * s.se;
  s.ci_hi = s.mean + kConfidenceZ * s.se;
  return s;
}

namespace {

struct MethodOutcome {
  bool skipped = false;
  double energy = 0.0;
  double runtime = 0.0;
};

struct IterationOutcome {
  bool done = false;
  std::uint64_t instance_hash = 0;
  std::vector<MethodOutcome> methods;
  std::exception_ptr error;
};

struct CellPlan {
  std::size_t n_flows;
  std::size_t m;
  std::vector<std::size_t> retired;
};

}  // namespace

McmcResult run_experiment(const ExperimentConfig& config, const std::atomic<bool>* cancel) {
  config.validate();
  const std::uint64_t master = config.master_seed;
  const UavNetwork net = generate_network(config.network, derive_seed(master, {kTagNetwork}));

  std::vector<CellPlan> plans;
  for (std::size_t nf : config.n_flows_list) {
    for (std::size_t m : config.m_list) {
      CellPlan plan{nf, m, {}};
      if (!config.resample_retired_per_iteration) plan.retired = sample_retired(net, m, derive_seed(master, {kTagRetired, m, nf}));
      plans.push_back(std::move(plan));
    }
  }

  const std::size_t per_cell = config.iterations;
  const std::size_t total = plans.size() * per_cell;
  std::vector<IterationOutcome> outcomes(total);

  const auto run_item = [&](std::size_t item) {
    const CellPlan& plan = plans[item / per_cell];
    const std::size_t k = item % per_cell;
    IterationOutcome& out = outcomes[item];
    try {
      const std::vector<std::size_t> retired = config.resample_retired_per_iteration
                                                   ? sample_retired(net, plan.m, derive_seed(master, {kTagRetired, plan.m, plan.n_flows, k}))
                                                   : plan.retired;
      const auto flows = sample_flows(net, retired, plan.n_flows, derive_seed(master, {plan.m, plan.n_flows, k}));
      const auto uavs = retiring_uavs(net, retired);
      const BuiltInstance built = build_instance(flows, uavs, config.timings);
      out.instance_hash = fingerprint(built.instance);
      for (Method method : config.methods) {
        MethodOutcome mo;
        if ((method == Method::ExactDp && built.instance.n() > config.exact_cap) ||
            (method == Method::BruteForce && built.instance.n() > kBruteForceCap)) {
          mo.skipped = true;
        } else {
          const SolverResult r =
              solve(built.instance, method, derive_seed(master, {kTagRandomSchedule, plan.m, plan.n_flows, k}), config.exact_cap);
          mo.energy = r.energy();
          mo.runtime = config.measure_runtime ? r.wall_time() : 0.0;
        }
        out.methods.push_back(mo);
      }
    } catch (...) {
      out.error = std::current_exception();
    }
    out.done = true;
  };

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      if (cancel && cancel->load()) return;
      const std::size_t item = next.fetch_add(1);
      if (item >= total) return;
      run_item(item);
    }
  };
  const std::size_t workers = std::min(config.threads, std::max<std::size_t>(total, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  for (const auto& out : outcomes) {
    if (out.error) std::rethrow_exception(out.error);
  }

  McmcResult result;
  result.config = config;
  for (std::size_t item = 0; item < total; ++item) {
    const IterationOutcome& out = outcomes[item];
    if (!out.done) {
      result.complete = false;
      continue;
    }
    const CellPlan& plan = plans[item / per_cell];
    for (std::size_t q = 0; q < config.methods.size(); ++q) {
      CellResult& cell = result.cells[CellKey{plan.n_flows, plan.m, config.methods[q]}];
      const MethodOutcome& mo = out.methods[q];
      if (mo.skipped) {
        ++cell.skipped;
        continue;
      }
      cell.samples.push_back(mo.energy);
      cell.runtimes.push_back(mo.runtime);
      cell.instance_hashes.push_back(out.instance_hash);
      cell.iterations.push_back(item % per_cell);
    }
  }
  return result;
}

std::vector<SummaryRow> summary_rows(const McmcResult& result) {
  std::vector<SummaryRow> rows;
  for (const auto& [key, cell] : result.cells) {
    if (cell.samples.size() < 2) continue;
    const Summary s = summarize(cell.samples);
    double runtime = 0.0;
    for (double r : cell.runtimes) runtime += r;
    runtime /= static_cast<double>(cell.runtimes.size());
    rows.push_back(SummaryRow{key.m, key.n_flows, std::string(method_name(key.method)), cell.samples.size(), s.mean, s.se,
                              s.ci_lo, s.ci_hi, runtime});
  }
  std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return std::tie(a.n_flows, a.m, a.method) < std::tie(b.n_flows, b.m, b.method);
  });
  return rows;
}

namespace {

std::string sig9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::string format_csv(const std::vector<SummaryRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.m) + "," + std::to_string(r.n_flows) + "," + r.method + "," + std::to_string(r.k) + "," +
           sig9(r.mean_energy) + "," + sig9(r.se) + "," + sig9(r.ci_lo) + "," + sig9(r.ci_hi) + "," + sig9(r.mean_runtime) + "\n";
  }
  return out;
}

void write_csv(const std::vector<SummaryRow>& rows, const std::string& path) { write_text(path, format_csv(rows)); }

void write_csv(const McmcResult& result, const std::string& path) { write_csv(summary_rows(result), path); }

std::vector<SummaryRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorKind::SchemaViolation, "missing or unexpected CSV header");
  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 9) throw Error(ErrorKind::SchemaViolation, "line " + std::to_string(line_no) + ": expected 9 fields");
    const auto as_uint = [&](const std::string& s) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
      if (s.empty() || *end != '\0') throw Error(ErrorKind::SchemaViolation, "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
      return static_cast<std::size_t>(v);
    };
    const auto as_real = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') throw Error(ErrorKind::SchemaViolation, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
      return v;
    };
    rows.push_back(SummaryRow{as_uint(fields[0]), as_uint(fields[1]), fields[2], as_uint(fields[3]), as_real(fields[4]),
                              as_real(fields[5]), as_real(fields[6]), as_real(fields[7]), as_real(fields[8])});
  }
  return rows;
}

std::vector<SummaryRow> read_csv(const std::string& path) { return parse_csv(read_text(path)); }

namespace {

std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string axis_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<SummaryRow>& rows, Metric metric) {
  if (rows.empty()) throw Error(ErrorKind::ConfigInvalid, "nothing to plot");
  constexpr double kWidth = 720, kHeight = 440;
  constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const bool energy = metric == Metric::Energy;

  const auto value = [&](const SummaryRow& r) { return energy ? r.mean_energy : r.mean_runtime; };
  const auto upper = [&](const SummaryRow& r) { return energy ? r.ci_hi : r.mean_runtime; };

  double m_lo = static_cast<double>(rows.front().m), m_hi = m_lo, y_hi = 0.0;
  for (const auto& r : rows) {
    m_lo = std::min(m_lo, static_cast<double>(r.m));
    m_hi = std::max(m_hi, static_cast<double>(r.m));
    y_hi = std::max(y_hi, upper(r));
  }
  if (m_hi == m_lo) {
    m_lo -= 1.0;
    m_hi += 1.0;
  }
  y_hi = y_hi > 0.0 ? y_hi * 1.1 : 1.0;
  const double y_scale = plot_h / y_hi;  // chart units per data unit
  const auto px = [&](double m) { return kLeft + (m - m_lo) / (m_hi - m_lo) * plot_w; };
  const auto py = [&](double y) { return kTop + plot_h - y * y_scale; };

  // Series keyed by (method, n_f), in row order (already sorted by n_f, m, method).
  std::map<std::pair<std::string, std::size_t>, std::vector<const SummaryRow*>> series;
  for (const auto& r : rows) series[{r.method, r.n_flows}].push_back(&r);
  for (auto& [key, pts] : series) {
    std::stable_sort(pts.begin(), pts.end(), [](const SummaryRow* a, const SummaryRow* b) { return a->m < b->m; });
  }

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 "
      << kWidth << " " << kHeight << "\" data-y-scale=\"" << sig9(y_scale) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed3(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << (energy ? "Hovering energy versus m" : "Execution time versus m") << "</text>\n";
  // Axes.
  svg << "<line class=\"axis\" x1=\"" << fixed3(kLeft) << "\" y1=\"" << fixed3(kTop + plot_h) << "\" x2=\"" << fixed3(kLeft + plot_w)
      << "\" y2=\"" << fixed3(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << fixed3(kLeft) << "\" y1=\"" << fixed3(kTop) << "\" x2=\"" << fixed3(kLeft) << "\" y2=\""
      << fixed3(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  std::vector<std::size_t> ms;
  for (const auto& r : rows) ms.push_back(r.m);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  for (std::size_t m : ms) {
    const double x = px(static_cast<double>(m));
    svg << "<text x=\"" << fixed3(x) << "\" y=\"" << fixed3(kTop + plot_h + 18) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << m << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double y = y_hi * t / 5.0;
    svg << "<text x=\"" << fixed3(kLeft - 6) << "\" y=\"" << fixed3(py(y) + 4) << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << axis_label(y) << "</text>\n";
  }
  svg << "<text x=\"" << fixed3(kLeft + plot_w / 2) << "\" y=\"" << fixed3(kHeight - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">m (retired UAVs)</text>\n";
  svg << "<text x=\"18\" y=\"" << fixed3(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
      << fixed3(kTop + plot_h / 2) << ")\">" << (energy ? "mean energy (J)" : "mean execution time (s)") << "</text>\n";

  std::size_t s_idx = 0;
  for (const auto& [key, pts] : series) {
    const char* color = kPalette[s_idx % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<g class=\"series\" data-method=\"" << key.first << "\" data-n-f=\"" << key.second << "\">\n";
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t p = 0; p < pts.size(); ++p) {
      svg << (p ? " " : "") << fixed3(px(static_cast<double>(pts[p]->m))) << "," << fixed3(py(value(*pts[p])));
    }
    svg << "\"/>\n";
    for (const SummaryRow* r : pts) {
      const double x = px(static_cast<double>(r->m));
      if (energy) {
        svg << "<line class=\"errbar\" x1=\"" << fixed3(x) << "\" y1=\"" << fixed3(py(r->ci_hi)) << "\" x2=\"" << fixed3(x) << "\" y2=\""
            << fixed3(py(r->ci_lo)) << "\" stroke=\"" << color << "\"/>\n";
      }
      svg << "<circle class=\"marker\" cx=\"" << fixed3(x) << "\" cy=\"" << fixed3(py(value(*r))) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    svg << "</g>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s_idx);
    svg << "<line x1=\"" << fixed3(kLeft + plot_w + 16) << "\" y1=\"" << fixed3(ly) << "\" x2=\"" << fixed3(kLeft + plot_w + 36)
        << "\" y2=\"" << fixed3(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed3(kLeft + plot_w + 42) << "\" y=\"" << fixed3(ly + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << key.first << ", N_f=" << key.second << "</text>\n";
    ++s_idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg(const std::vector<SummaryRow>& rows, Metric metric, const std::string& path) {
  write_text(path, render_svg(rows, metric));
}

void emit_svg(const McmcResult& result, Metric metric, const std::string& path) {
  emit_svg(summary_rows(result), metric, path);
}

}  // namespace uavr
