#pragma once

// Handover schedulers.
//
//   heuristic    static score order, O(n log n + Σ|Δ_i| + Σ|Λ_j|)
//   random       uniform permutation baseline
//   exact_dp     subset dynamic program, O(2^n · Σ|Δ_i|) time, O(2^n) memory
//   brute_force  enumeration of all n! orders; test oracle

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "uavr/model.hpp"

namespace uavr {

enum class Method { Heuristic, Random, ExactDp, BruteForce };

std::string_view method_name(Method method) noexcept;
/// Accepts the canonical names plus "exact" and "bruteforce".
std::optional<Method> parse_method(std::string_view name) noexcept;

struct ScoreTable {
  /// H_j = Σ_{i∈Λ_j} T_i; zero for UAVs with no flows.
  std::vector<double> h;
  /// S_i = Σ_{j∈Δ_i} P_j / H_j, in J/s².
  std::vector<double> s;
};

ScoreTable compute_scores(const ReplacementInstance& instance);

class SolverResult {
 public:
  /// Evaluates the energy of `schedule` itself so the stored value always
  /// agrees with compute_energy.
  SolverResult(const ReplacementInstance& instance, Schedule schedule, Method method, double wall_time);

  const Schedule& schedule() const noexcept { return schedule_; }
  double energy() const noexcept { return energy_; }
  Method method() const noexcept { return method_; }
  double wall_time() const noexcept { return wall_time_; }

 private:
  Schedule schedule_;
  double energy_;
  Method method_;
  double wall_time_;
};

inline constexpr std::size_t kDefaultExactCap = 22;
inline constexpr std::size_t kBruteForceCap = 8;

/// Flows by descending score, ties by ascending id.
SolverResult heuristic_schedule(const ReplacementInstance& instance);

/// Fisher-Yates permutation driven by `seed`.
SolverResult random_schedule(const ReplacementInstance& instance, std::uint64_t seed);

/// Minimum-energy schedule. Among optimal schedules the one with the lowest
/// id last (then second to last, ...) is returned. Throws InstanceTooLarge
/// when n > cap.
SolverResult exact_schedule_dp(const ReplacementInstance& instance, std::size_t cap = kDefaultExactCap);

/// Enumerates every permutation via compute_energy; same tie rule as
/// exact_schedule_dp. Throws InstanceTooLarge when n > 8.
SolverResult brute_force_schedule(const ReplacementInstance& instance);

/// Dispatches on `method`; `seed` is only used by Method::Random.
SolverResult solve(const ReplacementInstance& instance, Method method, std::uint64_t seed = 0,
                   std::size_t exact_cap = kDefaultExactCap);

}  // namespace uavr
