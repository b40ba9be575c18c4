#pragma once

// Replacement instances, SDN rule timing and hovering-energy evaluation.
//
// Units: durations in seconds, powers in watts, energy in joules. Identifiers
// are dense and 0-based inside an instance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uavr {

using FlowId = std::size_t;
using UavId = std::size_t;

/// Per-rule controller latencies.
struct RuleTimings {
  double tau_del = 0.005;
  double tau_ins = 0.005;
  double tau_mod = 0.010;

  static RuleTimings from_ms(double del_ms, double ins_ms, double mod_ms);

  /// Throws ConfigInvalid unless all three are finite and positive.
  void validate() const;

  friend bool operator==(const RuleTimings&, const RuleTimings&) = default;
};

struct RuleCounts {
  int r_del = 0;
  int r_ins = 0;
  int r_mod = 0;

  friend bool operator==(const RuleCounts&, const RuleCounts&) = default;
};

struct FlowSpec {
  FlowId id = 0;
  /// Absent when the instance was given handover times directly.
  std::optional<RuleCounts> rule_counts;
  double handover_time = 0.0;
  /// Δ: retired UAVs the flow traverses, ascending.
  std::vector<UavId> retired_set;
};

struct RetiredUav {
  UavId id = 0;
  double hover_power = 0.0;
  /// Λ: flows passing through this UAV, ascending. Derived by the instance.
  std::vector<FlowId> flow_set;
};

/// T = R_del·τ_del + R_ins·τ_ins + R_mod·τ_mod.
double handover_time(const RuleCounts& counts, const RuleTimings& timings);

/// Rule changes needed to reroute `route` around the retired UAVs on it: one
/// delete and one insert per retired hop, plus one modification at the
/// predecessor of each maximal run of retired hops.
///
/// Throws EndpointRetired if the first or last node is retired and
/// InvalidInstance if the route has fewer than two nodes.
RuleCounts rule_counts_from_route(std::span<const std::size_t> route, std::span<const std::size_t> retired);

/// Abstract scheduling problem: n flows to hand over, m UAVs waiting to retire.
///
/// Construction checks every invariant (dense ids, non-empty Δ_i inside
/// 0..m-1, positive finite T_i matching rule counts when present, P_j ≥ 0)
/// and derives Λ_j from the Δ_i. Any flow_set supplied on the UAVs is
/// replaced by the derived one.
class ReplacementInstance {
 public:
  ReplacementInstance() = default;
  ReplacementInstance(std::vector<FlowSpec> flows, std::vector<RetiredUav> uavs, RuleTimings timings);

  const std::vector<FlowSpec>& flows() const noexcept { return flows_; }
  const std::vector<RetiredUav>& uavs() const noexcept { return uavs_; }
  const RuleTimings& timings() const noexcept { return timings_; }

  std::size_t n() const noexcept { return flows_.size(); }
  std::size_t m() const noexcept { return uavs_.size(); }

  double time(FlowId i) const { return flows_[i].handover_time; }
  double power(UavId j) const { return uavs_[j].hover_power; }
  const std::vector<UavId>& delta(FlowId i) const { return flows_[i].retired_set; }
  const std::vector<FlowId>& lambda(UavId j) const { return uavs_[j].flow_set; }

 private:
  std::vector<FlowSpec> flows_;
  std::vector<RetiredUav> uavs_;
  RuleTimings timings_;
};

/// Stable 64-bit digest of an instance's scheduling-relevant content.
std::uint64_t fingerprint(const ReplacementInstance& instance);

struct Schedule {
  std::vector<FlowId> order;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Throws InvalidSchedule unless `schedule` is a permutation of 0..n-1.
void validate_schedule(const ReplacementInstance& instance, const Schedule& schedule);

struct EnergyReport {
  /// C_j: time at which UAV j leaves service.
  std::vector<double> completion_times;
  /// Finish time of each flow, indexed by flow id.
  std::vector<double> flow_finish_times;
  double total_energy = 0.0;
};

/// Hovering energy Σ_j P_j·C_j of handing flows over in `schedule` order.
EnergyReport compute_energy(const ReplacementInstance& instance, const Schedule& schedule);

/// A routed flow in network coordinates.
struct RoutedFlow {
  std::size_t id = 0;
  std::vector<std::size_t> route;
};

/// A retiring UAV in network coordinates.
struct RetiringUav {
  std::size_t id = 0;
  double hover_power = 0.0;
};

/// Instance plus the mapping from dense ids back to the caller's ids.
struct BuiltInstance {
  ReplacementInstance instance;
  std::vector<std::size_t> flow_origin;
  std::vector<std::size_t> uav_origin;
};

/// Builds the abstract instance from routed flows. Flows that touch no
/// retired UAV are dropped; survivors keep their relative order. UAV dense ids
/// follow the order of `retired`.
///
/// Throws EmptyInstance when there are no retired UAVs, EndpointRetired when a
/// surviving flow starts or ends at a retired UAV, InvalidInstance on
/// duplicate retired ids or routes that revisit a node.
BuiltInstance build_instance(std::span<const RoutedFlow> flows, std::span<const RetiringUav> retired,
                             const RuleTimings& timings);

}  // namespace uavr
