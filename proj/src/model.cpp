#include "uavr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "uavr/errors.hpp"

namespace uavr {

RuleTimings RuleTimings::from_ms(double del_ms, double ins_ms, double mod_ms) {
  RuleTimings t{del_ms / 1000.0, ins_ms / 1000.0, mod_ms / 1000.0};
  t.validate();
  return t;
}

void RuleTimings::validate() const {
  for (double v : {tau_del, tau_ins, tau_mod}) {
    if (!std::isfinite(v) || v <= 0.0) throw Error(ErrorKind::ConfigInvalid, "rule timings must be finite and positive");
  }
}

double handover_time(const RuleCounts& counts, const RuleTimings& timings) {
  return counts.r_del * timings.tau_del + counts.r_ins * timings.tau_ins + counts.r_mod * timings.tau_mod;
}

RuleCounts rule_counts_from_route(std::span<const std::size_t> route, std::span<const std::size_t> retired) {
  if (route.size() < 2) throw Error(ErrorKind::InvalidInstance, "route needs at least two nodes");
  const auto is_retired = [&](std::size_t node) { return std::find(retired.begin(), retired.end(), node) != retired.end(); };
  if (is_retired(route.front()) || is_retired(route.back())) {
    throw Error(ErrorKind::EndpointRetired, "route endpoint " +
                                                std::to_string(is_retired(route.front()) ? route.front() : route.back()) +
                                                " is retired");
  }
  RuleCounts counts;
  bool in_run = false;
  for (std::size_t node : route) {
    const bool r = is_retired(node);
    if (r) {
      ++counts.r_del;
      ++counts.r_ins;
      if (!in_run) ++counts.r_mod;
    }
    in_run = r;
  }
  return counts;
}

ReplacementInstance::ReplacementInstance(std::vector<FlowSpec> flows, std::vector<RetiredUav> uavs, RuleTimings timings)
    : flows_(std::move(flows)), uavs_(std::move(uavs)), timings_(timings) {
  timings_.validate();
  const std::size_t m = uavs_.size();
  for (std::size_t j = 0; j < m; ++j) {
    auto& u = uavs_[j];
    if (u.id != j) throw Error(ErrorKind::InvalidInstance, "UAV ids must be dense 0..m-1");
    if (!std::isfinite(u.hover_power) || u.hover_power < 0.0) {
      throw Error(ErrorKind::InvalidInstance, "UAV " + std::to_string(j) + " has negative or non-finite hover power");
    }
    u.flow_set.clear();
  }
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    auto& f = flows_[i];
    if (f.id != i) throw Error(ErrorKind::InvalidInstance, "flow ids must be dense 0..n-1");
    if (f.retired_set.empty()) throw Error(ErrorKind::InvalidInstance, "flow " + std::to_string(i) + " traverses no retired UAV");
    std::sort(f.retired_set.begin(), f.retired_set.end());
    if (std::adjacent_find(f.retired_set.begin(), f.retired_set.end()) != f.retired_set.end()) {
      throw Error(ErrorKind::InvalidInstance, "flow " + std::to_string(i) + " lists a UAV twice");
    }
    if (f.retired_set.back() >= m) throw Error(ErrorKind::InvalidInstance, "flow " + std::to_string(i) + " references unknown UAV");
    if (!std::isfinite(f.handover_time) || f.handover_time <= 0.0) {
      throw Error(ErrorKind::InvalidInstance, "flow " + std::to_string(i) + " needs a positive handover time");
    }
    if (f.rule_counts) {
      const auto& c = *f.rule_counts;
      if (c.r_del < 0 || c.r_ins < 0 || c.r_mod < 0) throw Error(ErrorKind::InvalidInstance, "negative rule count");
      const double expected = handover_time(c, timings_);
      if (std::abs(expected - f.handover_time) > 1e-9 * std::max(1.0, expected)) {
        throw Error(ErrorKind::InvalidInstance, "flow " + std::to_string(i) + " handover time disagrees with its rule counts");
      }
    }
    for (UavId j : f.retired_set) uavs_[j].flow_set.push_back(i);
  }
}

std::uint64_t fingerprint(const ReplacementInstance& instance) {
  // FNV-1a over the raw values.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= p[k];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {instance.n(), instance.m()};
  feed(dims, sizeof dims);
  for (const auto& f : instance.flows()) {
    feed(&f.handover_time, sizeof f.handover_time);
    for (std::uint64_t j : f.retired_set) feed(&j, sizeof j);
    const std::uint64_t sep = ~0ULL;
    feed(&sep, sizeof sep);
  }
  for (const auto& u : instance.uavs()) feed(&u.hover_power, sizeof u.hover_power);
  return h;
}

void validate_schedule(const ReplacementInstance& instance, const Schedule& schedule) {
  const std::size_t n = instance.n();
  if (schedule.order.size() != n) {
    throw Error(ErrorKind::InvalidSchedule,
                "schedule has " + std::to_string(schedule.order.size()) + " entries, instance has " + std::to_string(n) + " flows");
  }
  std::vector<bool> seen(n, false);
  for (FlowId f : schedule.order) {
    if (f >= n) throw Error(ErrorKind::InvalidSchedule, "unknown flow id " + std::to_string(f));
    if (seen[f]) throw Error(ErrorKind::InvalidSchedule, "flow " + std::to_string(f) + " scheduled twice");
    seen[f] = true;
  }
}

EnergyReport compute_energy(const ReplacementInstance& instance, const Schedule& schedule) {
  validate_schedule(instance, schedule);
  EnergyReport report;
  report.completion_times.assign(instance.m(), 0.0);
  report.flow_finish_times.assign(instance.n(), 0.0);
  double clock = 0.0;
  for (FlowId f : schedule.order) {
    clock += instance.time(f);
    report.flow_finish_times[f] = clock;
    // Later flows overwrite earlier ones, leaving the last member of Λ_j.
    for (UavId j : instance.delta(f)) report.completion_times[j] = clock;
  }
  for (UavId j = 0; j < instance.m(); ++j) report.total_energy += instance.power(j) * report.completion_times[j];
  return report;
}

BuiltInstance build_instance(std::span<const RoutedFlow> flows, std::span<const RetiringUav> retired,
                             const RuleTimings& timings) {
  timings.validate();
  if (retired.empty()) throw Error(ErrorKind::EmptyInstance, "no retired UAVs");

  BuiltInstance out;
  std::unordered_map<std::size_t, UavId> dense_uav;
  std::vector<std::size_t> retired_ids;
  std::vector<RetiredUav> uavs;
  for (const auto& r : retired) {
    if (!dense_uav.emplace(r.id, uavs.size()).second) {
      throw Error(ErrorKind::InvalidInstance, "retired UAV " + std::to_string(r.id) + " listed twice");
    }
    out.uav_origin.push_back(r.id);
    retired_ids.push_back(r.id);
    uavs.push_back(RetiredUav{uavs.size(), r.hover_power, {}});
  }

  std::vector<FlowSpec> specs;
  for (const auto& flow : flows) {
    std::unordered_set<std::size_t> visited;
    for (std::size_t node : flow.route) {
      if (!visited.insert(node).second) {
        throw Error(ErrorKind::InvalidInstance, "route of flow " + std::to_string(flow.id) + " revisits node " + std::to_string(node));
      }
    }
    std::vector<UavId> delta;
    for (std::size_t node : flow.route) {
      if (auto it = dense_uav.find(node); it != dense_uav.end()) delta.push_back(it->second);
    }
    if (delta.empty()) continue;
    const RuleCounts counts = rule_counts_from_route(flow.route, retired_ids);
    FlowSpec spec;
    spec.id = specs.size();
    spec.rule_counts = counts;
    spec.handover_time = handover_time(counts, timings);
    spec.retired_set = std::move(delta);
    specs.push_back(std::move(spec));
    out.flow_origin.push_back(flow.id);
  }
  out.instance = ReplacementInstance(std::move(specs), std::move(uavs), timings);
  return out;
}

}  // namespace uavr
