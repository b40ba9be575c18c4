#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "uavr/errors.hpp"
#include "uavr/sched.hpp"

using namespace uavr;
using uavr::testing::rel_close;

namespace {

ReplacementInstance identical_flows(std::size_t n) {
  std::vector<FlowSpec> flows;
  for (FlowId i = 0; i < n; ++i) flows.push_back(FlowSpec{i, std::nullopt, 0.02, {0, 1}});
  return ReplacementInstance(std::move(flows), {RetiredUav{0, 50.0, {}}, RetiredUav{1, 80.0, {}}}, RuleTimings{});
}

/// Best-of-runs heuristic times, alternating between the two instances.
std::pair<double, double> min_runtimes(const ReplacementInstance& a, const ReplacementInstance& b, int runs) {
  double ta = 1e30, tb = 1e30;
  for (int r = 0; r < runs; ++r) {
    ta = std::min(ta, heuristic_schedule(a).wall_time());
    tb = std::min(tb, heuristic_schedule(b).wall_time());
  }
  return {ta, tb};
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::Heuristic, Method::Random, Method::ExactDp, Method::BruteForce}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK(parse_method("exact") == Method::ExactDp);
  CHECK(parse_method("bruteforce") == Method::BruteForce);
  CHECK_FALSE(parse_method("greedy").has_value());
}

TEST_CASE("scores on the worked example") {
  const auto inst = uavr::testing::worked_example();
  const ScoreTable t = compute_scores(inst);
  CHECK(t.h[0] == doctest::Approx(0.070));
  CHECK(t.h[3] == doctest::Approx(0.090));
  CHECK(t.s[0] == doctest::Approx(5357.142857).epsilon(1e-9));
  CHECK(t.s[1] == doctest::Approx(2539.682540).epsilon(1e-9));
  CHECK(t.s[2] == doctest::Approx(2539.682540).epsilon(1e-9));
  CHECK(t.s[3] == doctest::Approx(4444.444444).epsilon(1e-9));
}

TEST_CASE("heuristic") {
  SUBCASE("worked example") {
    const auto r = heuristic_schedule(uavr::testing::worked_example());
    CHECK(r.schedule().order == std::vector<FlowId>{0, 3, 1, 2});
    CHECK(rel_close(r.energy(), 47.0));
    CHECK(r.method() == Method::Heuristic);
  }
  SUBCASE("identical flows keep id order") {
    CHECK(heuristic_schedule(identical_flows(6)).schedule().order == std::vector<FlowId>{0, 1, 2, 3, 4, 5});
  }
  SUBCASE("no flows") {
    const ReplacementInstance empty({}, {RetiredUav{0, 10.0, {}}}, RuleTimings{});
    const auto r = heuristic_schedule(empty);
    CHECK(r.schedule().order.empty());
    CHECK(r.energy() == 0.0);
  }
}

TEST_CASE("random schedule") {
  SUBCASE("single flow") {
    const auto inst = identical_flows(1);
    CHECK(random_schedule(inst, 17).schedule().order == std::vector<FlowId>{0});
  }
  SUBCASE("deterministic per seed") {
    const auto inst = uavr::testing::worked_example();
    CHECK(random_schedule(inst, 5).schedule().order == random_schedule(inst, 5).schedule().order);
  }
  SUBCASE("uniform over permutations") {
    const auto inst = identical_flows(3);
    std::map<std::vector<FlowId>, int> counts;
    constexpr int kSeeds = 10000;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) ++counts[random_schedule(inst, seed).schedule().order];
    CHECK(counts.size() == 6);
    for (const auto& [perm, c] : counts) CHECK(std::abs(c / double(kSeeds) - 1.0 / 6.0) <= 0.02);
  }
}

TEST_CASE("exact solvers") {
  SUBCASE("worked example optimum") {
    const auto inst = uavr::testing::worked_example();
    const auto dp = exact_schedule_dp(inst);
    CHECK(dp.schedule().order == std::vector<FlowId>{3, 0, 2, 1});
    CHECK(rel_close(dp.energy(), 46.0));
    // (F4, F1, F2, F3) ties; the lower id goes last.
    CHECK(rel_close(compute_energy(inst, Schedule{{3, 0, 1, 2}}).total_energy, 46.0));
    const auto bf = brute_force_schedule(inst);
    CHECK(bf.schedule().order == dp.schedule().order);
    CHECK(bf.energy() == dp.energy());
  }
  SUBCASE("dynamic program agrees with enumeration") {
    Rng rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
      const auto inst = uavr::testing::random_instance(rng, {1 + rng.below(7), 1 + rng.below(6)});
      const auto dp = exact_schedule_dp(inst);
      const auto bf = brute_force_schedule(inst);
      CHECK(dp.schedule().order == bf.schedule().order);
      CHECK(dp.energy() == bf.energy());
    }
  }
  SUBCASE("two flows on one UAV: heavier handover last") {
    const ReplacementInstance inst({FlowSpec{0, std::nullopt, 0.05, {0}}, FlowSpec{1, std::nullopt, 0.01, {1}}},
                                   {RetiredUav{0, 10.0, {}}, RetiredUav{1, 300.0, {}}}, RuleTimings{});
    // Serving the 300 W UAV first: 300·0.01 + 10·0.06 = 3.6 J.
    CHECK(exact_schedule_dp(inst).schedule().order == std::vector<FlowId>{1, 0});
    CHECK(rel_close(exact_schedule_dp(inst).energy(), 3.6));
    CHECK(brute_force_schedule(inst).schedule().order == std::vector<FlowId>{1, 0});
  }
  SUBCASE("no flows") {
    const ReplacementInstance empty({}, {RetiredUav{0, 10.0, {}}}, RuleTimings{});
    CHECK(exact_schedule_dp(empty).schedule().order.empty());
    CHECK(brute_force_schedule(empty).energy() == 0.0);
  }
  SUBCASE("size limits") {
    Rng rng(1);
    const auto nine = uavr::testing::random_instance(rng, {9, 3});
    try {
      brute_force_schedule(nine);
      FAIL("expected InstanceTooLarge");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InstanceTooLarge);
    }
    CHECK_NOTHROW(exact_schedule_dp(nine));
    CHECK_THROWS_AS(exact_schedule_dp(nine, 8), Error);
    CHECK_THROWS_AS(solve(nine, Method::ExactDp, 0, 8), Error);
  }
}

TEST_CASE("solver properties on random instances") {
  Rng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = uavr::testing::random_instance(rng, {1 + rng.below(10), 1 + rng.below(6)});
    const auto exact = exact_schedule_dp(inst);
    const auto heur = heuristic_schedule(inst);
    const auto rnd = random_schedule(inst, trial);
    CHECK(exact.energy() >= 0.0);
    CHECK(heur.energy() >= exact.energy() * (1 - 1e-12));
    CHECK(rnd.energy() >= exact.energy() * (1 - 1e-12));

    // Scaling every power by 2 leaves orders unchanged and doubles energies exactly.
    std::vector<RetiredUav> uavs = inst.uavs();
    for (auto& u : uavs) u.hover_power *= 2.0;
    const ReplacementInstance doubled(inst.flows(), uavs, inst.timings());
    const auto exact2 = exact_schedule_dp(doubled);
    const auto heur2 = heuristic_schedule(doubled);
    CHECK(exact2.schedule().order == exact.schedule().order);
    CHECK(heur2.schedule().order == heur.schedule().order);
    CHECK(exact2.energy() == 2.0 * exact.energy());
    CHECK(heur2.energy() == 2.0 * heur.energy());
  }
}

TEST_CASE("heuristic runtime grows near-linearly") {
  Rng rng(31);
  const auto small = uavr::testing::random_instance(rng, {10000, 10});
  const auto large = uavr::testing::random_instance(rng, {20000, 10});
  const auto [t_small, t_large] = min_runtimes(small, large, 15);
  CHECK(t_large / t_small <= 2.5);
}
