#pragma once

// Shared test instances and independent reference evaluators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavr/model.hpp"
#include "uavr/rng.hpp"

namespace uavr::testing {

/// Four flows over five retired UAVs, all hovering at 100 W:
///   Λ1={F1,F2}  Λ2={F1}  Λ3={F1,F3}  Λ4={F2,F3,F4}  Λ5={F4}
/// with T = 40, 30, 30, 30 ms from rule counts (3,3,1), (2,2,1) x3.
inline ReplacementInstance worked_example() {
  const RuleTimings timings;
  const auto flow = [&](FlowId id, RuleCounts c, std::vector<UavId> delta) {
    return FlowSpec{id, c, handover_time(c, timings), std::move(delta)};
  };
  std::vector<FlowSpec> flows{flow(0, {3, 3, 1}, {0, 1, 2}), flow(1, {2, 2, 1}, {0, 3}), flow(2, {2, 2, 1}, {2, 3}),
                              flow(3, {2, 2, 1}, {3, 4})};
  std::vector<RetiredUav> uavs;
  for (UavId j = 0; j < 5; ++j) uavs.push_back(RetiredUav{j, 100.0, {}});
  return ReplacementInstance(std::move(flows), std::move(uavs), timings);
}

/// Network-level description of the worked example: 14 UAVs, retired ids
/// 1..5 standing for U1..U5, six flows of which four cross the retired set.
inline std::vector<RoutedFlow> worked_example_routes() {
  return {{0, {6, 1, 2, 3, 7}}, {1, {8, 1, 4, 9}}, {2, {6, 14, 7}}, {3, {10, 3, 4, 11}}, {4, {8, 9}}, {5, {12, 4, 5, 13}}};
}

inline std::vector<RetiringUav> worked_example_retired() {
  return {{1, 100.0}, {2, 100.0}, {3, 100.0}, {4, 100.0}, {5, 100.0}};
}

struct RandomInstanceSpec {
  std::size_t n = 5;
  std::size_t m = 4;
  double t_lo = 0.005, t_hi = 0.060;
  double p_lo = 20.0, p_hi = 310.0;
};

/// Random Δ sets (non-empty), T and P uniform in the given ranges. Some UAVs
/// may end up with no flows.
inline ReplacementInstance random_instance(Rng& rng, const RandomInstanceSpec& spec) {
  std::vector<FlowSpec> flows;
  for (FlowId i = 0; i < spec.n; ++i) {
    std::vector<UavId> delta;
    for (UavId j = 0; j < spec.m; ++j) {
      if (rng.below(2) == 0) delta.push_back(j);
    }
    if (delta.empty()) delta.push_back(rng.below(spec.m));
    flows.push_back(FlowSpec{i, std::nullopt, rng.uniform(spec.t_lo, spec.t_hi), std::move(delta)});
  }
  std::vector<RetiredUav> uavs;
  for (UavId j = 0; j < spec.m; ++j) uavs.push_back(RetiredUav{j, rng.uniform(spec.p_lo, spec.p_hi), {}});
  return ReplacementInstance(std::move(flows), std::move(uavs), RuleTimings{});
}

inline Schedule random_permutation(Rng& rng, std::size_t n) {
  Schedule s;
  for (FlowId i = 0; i < n; ++i) s.order.push_back(i);
  for (std::size_t k = n; k > 1; --k) std::swap(s.order[k - 1], s.order[rng.below(k)]);
  return s;
}

/// Reference energy straight from the definition: UAV j retires once every
/// flow in Λ_j is done, i.e. after the flow at the largest schedule position
/// among Λ_j; its hover time is the sum of T over all flows up to there.
inline double reference_energy(const ReplacementInstance& inst, const Schedule& s) {
  double total = 0.0;
  for (UavId j = 0; j < inst.m(); ++j) {
    std::size_t last = 0;
    bool any = false;
    for (std::size_t p = 0; p < s.order.size(); ++p) {
      const auto& lam = inst.lambda(j);
      if (std::find(lam.begin(), lam.end(), s.order[p]) != lam.end()) {
        last = p;
        any = true;
      }
    }
    if (!any) continue;
    double c = 0.0;
    for (std::size_t p = 0; p <= last; ++p) c += inst.time(s.order[p]);
    total += inst.power(j) * c;
  }
  return total;
}

inline bool rel_close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("uavr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace uavr::testing
