#include "uavr/sched.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "uavr/errors.hpp"
#include "uavr/rng.hpp"

namespace uavr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Relative slack used to treat floating-point near-equal energies as ties, so
// both exact solvers settle on the same representative.
constexpr double kTieTolerance = 1e-12;

}  // namespace

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::Heuristic: return "heuristic";
    case Method::Random: return "random";
    case Method::ExactDp: return "exact_dp";
    case Method::BruteForce: return "brute_force";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  if (name == "heuristic") return Method::Heuristic;
  if (name == "random") return Method::Random;
  if (name == "exact_dp" || name == "exact") return Method::ExactDp;
  if (name == "brute_force" || name == "bruteforce") return Method::BruteForce;
  return std::nullopt;
}

ScoreTable compute_scores(const ReplacementInstance& instance) {
  ScoreTable table;
  table.h.assign(instance.m(), 0.0);
  table.s.assign(instance.n(), 0.0);
  for (UavId j = 0; j < instance.m(); ++j) {
    for (FlowId i : instance.lambda(j)) table.h[j] += instance.time(i);
  }
  for (FlowId i = 0; i < instance.n(); ++i) {
    for (UavId j : instance.delta(i)) table.s[i] += instance.power(j) / table.h[j];
  }
  return table;
}

SolverResult::SolverResult(const ReplacementInstance& instance, Schedule schedule, Method method, double wall_time)
    : schedule_(std::move(schedule)),
      energy_(compute_energy(instance, schedule_).total_energy),
      method_(method),
      wall_time_(wall_time) {}

SolverResult heuristic_schedule(const ReplacementInstance& instance) {
  const auto start = Clock::now();
  const ScoreTable scores = compute_scores(instance);
  Schedule schedule;
  schedule.order.resize(instance.n());
  std::iota(schedule.order.begin(), schedule.order.end(), FlowId{0});
  std::sort(schedule.order.begin(), schedule.order.end(), [&](FlowId a, FlowId b) {
    if (scores.s[a] != scores.s[b]) return scores.s[a] > scores.s[b];
    return a < b;
  });
  const double elapsed = seconds_since(start);
  return SolverResult(instance, std::move(schedule), Method::Heuristic, elapsed);
}

SolverResult random_schedule(const ReplacementInstance& instance, std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  Schedule schedule;
  schedule.order.resize(instance.n());
  std::iota(schedule.order.begin(), schedule.order.end(), FlowId{0});
  for (std::size_t k = schedule.order.size(); k > 1; --k) {
    std::swap(schedule.order[k - 1], schedule.order[rng.below(k)]);
  }
  const double elapsed = seconds_since(start);
  return SolverResult(instance, std::move(schedule), Method::Random, elapsed);
}

SolverResult exact_schedule_dp(const ReplacementInstance& instance, std::size_t cap) {
  const std::size_t n = instance.n();
  if (n > cap || n >= 32) {
    throw Error(ErrorKind::InstanceTooLarge, "exact solver capped at " + std::to_string(std::min<std::size_t>(cap, 31)) +
                                                 " flows, instance has " + std::to_string(n));
  }
  const auto start = Clock::now();
  using Mask = std::uint32_t;

  // Λ_j as a bitmask over flows.
  std::vector<Mask> members(instance.m(), 0);
  for (UavId j = 0; j < instance.m(); ++j) {
    for (FlowId i : instance.lambda(j)) members[j] |= Mask{1} << i;
  }

  const std::size_t states = std::size_t{1} << n;
  const Mask full = static_cast<Mask>(states - 1);

  // elapsed[X]: time at which the flows in X are done if they go first.
  std::vector<double> elapsed(states, 0.0);
  for (std::size_t x = 1; x < states; ++x) {
    const Mask low = static_cast<Mask>(x & (~x + 1));
    elapsed[x] = elapsed[x ^ low] + instance.time(static_cast<FlowId>(std::countr_zero(low)));
  }

  // Energy charged when f completes the set X: every UAV whose last
  // outstanding flow is f retires at elapsed[X].
  const auto step_cost = [&](Mask x, FlowId f) {
    double power = 0.0;
    for (UavId j : instance.delta(f)) {
      if ((members[j] & ~x) == 0) power += instance.power(j);
    }
    return elapsed[x] * power;
  };

  // best[S]: least energy spent while the flows in S go first, in any order.
  std::vector<double> best(states, 0.0);
  for (std::size_t s = 1; s < states; ++s) {
    const Mask set = static_cast<Mask>(s);
    double value = std::numeric_limits<double>::infinity();
    for (Mask rest = set; rest != 0; rest &= rest - 1) {
      const auto f = static_cast<FlowId>(std::countr_zero(rest));
      value = std::min(value, best[set ^ (Mask{1} << f)] + step_cost(set, f));
    }
    best[s] = value;
  }

  // Fill positions from the back, taking the lowest id that still allows an optimum.
  Schedule schedule;
  schedule.order.resize(n);
  Mask set = full;
  for (std::size_t pos = n; pos-- > 0;) {
    const double target = best[set] + kTieTolerance * std::abs(best[set]);
    for (Mask rest = set; rest != 0; rest &= rest - 1) {
      const auto f = static_cast<FlowId>(std::countr_zero(rest));
      const Mask prev = set ^ (Mask{1} << f);
      if (best[prev] + step_cost(set, f) <= target) {
        schedule.order[pos] = f;
        set = prev;
        break;
      }
    }
  }
  const double wall = seconds_since(start);
  return SolverResult(instance, std::move(schedule), Method::ExactDp, wall);
}

SolverResult brute_force_schedule(const ReplacementInstance& instance) {
  const std::size_t n = instance.n();
  if (n > kBruteForceCap) {
    throw Error(ErrorKind::InstanceTooLarge, "brute force capped at " + std::to_string(kBruteForceCap) + " flows, instance has " +
                                                 std::to_string(n));
  }
  const auto start = Clock::now();
  Schedule current;
  current.order.resize(n);
  const auto reset = [&] { std::iota(current.order.begin(), current.order.end(), FlowId{0}); };

  reset();
  double best_energy = std::numeric_limits<double>::infinity();
  do {
    best_energy = std::min(best_energy, compute_energy(instance, current).total_energy);
  } while (std::next_permutation(current.order.begin(), current.order.end()));

  // Among optimal orders, prefer the lowest id in the last position, then the one before it, and so on.
  const auto from_back = [](const Schedule& a, const Schedule& b) {
    return std::lexicographical_compare(a.order.rbegin(), a.order.rend(), b.order.rbegin(), b.order.rend());
  };
  const double target = best_energy + kTieTolerance * std::abs(best_energy);
  std::optional<Schedule> best;
  reset();
  do {
    if (compute_energy(instance, current).total_energy <= target && (!best || from_back(current, *best))) best = current;
  } while (std::next_permutation(current.order.begin(), current.order.end()));
  const double wall = seconds_since(start);
  return SolverResult(instance, std::move(*best), Method::BruteForce, wall);
}

SolverResult solve(const ReplacementInstance& instance, Method method, std::uint64_t seed, std::size_t exact_cap) {
  switch (method) {
    case Method::Heuristic: return heuristic_schedule(instance);
    case Method::Random: return random_schedule(instance, seed);
    case Method::ExactDp: return exact_schedule_dp(instance, exact_cap);
    case Method::BruteForce: return brute_force_schedule(instance);
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown method");
}

}  // namespace uavr
