#include <doctest.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "uavr/experiment.hpp"
#include "uavr/io.hpp"

using namespace uavr;
namespace fs = std::filesystem;

namespace {

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run_cli(std::vector<std::string> args, const std::atomic<bool>* cancel = nullptr) {
  args.insert(args.begin(), "uavr");
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = cli::run(args, cancel);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("gen-network") {
  const fs::path dir = uavr::testing::scratch_dir("cli_net");
  REQUIRE(run_cli({"gen-network", "--seed", "1", "--out", s(dir / "a.json")}).code == cli::kOk);
  REQUIRE(run_cli({"gen-network", "--seed", "1", "--out", s(dir / "b.json")}).code == cli::kOk);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(network_from_json(read_json_file(s(dir / "a.json"))).network.size() == 40);

  write_text(dir / "one.json", R"({"num_uavs": 1})");
  CHECK(run_cli({"gen-network", "--params", s(dir / "one.json"), "--seed", "1", "--out", s(dir / "c.json")}).code ==
        cli::kInvalidInput);
  CHECK(run_cli({"gen-network", "--seed", "1", "--out", "/nonexistent-dir/n.json"}).code == cli::kIoFailure);
  CHECK(run_cli({"gen-network", "--out", s(dir / "d.json")}).code == cli::kInvalidInput);
  CHECK(run_cli({}).code == cli::kInvalidInput);
}

TEST_CASE("schedule") {
  const fs::path dir = uavr::testing::scratch_dir("cli_sched");
  write_json_file(s(dir / "fig.json"), instance_to_json(uavr::testing::worked_example()));
  const auto energy = [&](const std::string& method) {
    const auto r = run_cli({"schedule", "--instance", s(dir / "fig.json"), "--method", method, "--seed", "3", "--no-timing"});
    REQUIRE(r.code == cli::kOk);
    return Json::parse(r.out)["energy_j"].get<double>();
  };

  CHECK(energy("exact") == doctest::Approx(46.0).epsilon(1e-9));
  CHECK(energy("bruteforce") == doctest::Approx(46.0).epsilon(1e-9));
  CHECK(energy("heuristic") == doctest::Approx(47.0).epsilon(1e-9));
  CHECK(energy("random") >= 46.0);

  SUBCASE("file output is byte-identical across runs") {
    for (const char* name : {"r1.json", "r2.json"}) {
      REQUIRE(run_cli({"schedule", "--instance", s(dir / "fig.json"), "--method", "random", "--seed", "8", "--no-timing",
                       "--out", s(dir / name)})
                  .code == cli::kOk);
    }
    CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));
  }
  SUBCASE("errors") {
    CHECK(run_cli({"schedule", "--instance", s(dir / "fig.json"), "--method", "random"}).code == cli::kInvalidInput);
    CHECK(run_cli({"schedule", "--instance", s(dir / "fig.json"), "--method", "greedy"}).code == cli::kInvalidInput);
    CHECK(run_cli({"schedule", "--instance", s(dir / "fig.json"), "--method", "exact", "--exact-cap", "3"}).code ==
          cli::kTooLarge);

    write_text(dir / "bad.json", "{\n  \"flows\": [\n    {\"id\": 0,,}\n  ]\n}\n");
    const auto bad = run_cli({"schedule", "--instance", s(dir / "bad.json")});
    CHECK(bad.code == cli::kInvalidInput);
    CHECK(bad.err.find("line 3") != std::string::npos);
    CHECK(bad.err.find("column") != std::string::npos);

    Rng rng(2);
    write_json_file(s(dir / "nine.json"), instance_to_json(uavr::testing::random_instance(rng, {9, 3})));
    CHECK(run_cli({"schedule", "--instance", s(dir / "nine.json"), "--method", "bruteforce"}).code == cli::kTooLarge);
  }
}

TEST_CASE("export-ilp") {
  const fs::path dir = uavr::testing::scratch_dir("cli_lp");
  write_json_file(s(dir / "fig.json"), instance_to_json(uavr::testing::worked_example()));
  REQUIRE(run_cli({"export-ilp", "--instance", s(dir / "fig.json"), "--out", s(dir / "a.lp")}).code == cli::kOk);
  REQUIRE(run_cli({"export-ilp", "--instance", s(dir / "fig.json"), "--out", s(dir / "b.lp")}).code == cli::kOk);
  const std::string lp = slurp(dir / "a.lp");
  CHECK(lp == slurp(dir / "b.lp"));
  const std::size_t binary_start = lp.find("Binary\n");
  REQUIRE(binary_start != std::string::npos);
  const std::string binaries = lp.substr(binary_start + 7, lp.find("End") - binary_start - 7);
  CHECK(std::count(binaries.begin(), binaries.end(), '\n') == 72);

  write_text(dir / "tiny.json", R"({"flows": [{"id": 0, "t_ms": 20, "delta": [0]}], "uavs": [{"id": 0, "p_watts": 50}]})");
  const auto tiny = run_cli({"export-ilp", "--instance", s(dir / "tiny.json"), "--out", "-"});
  REQUIRE(tiny.code == cli::kOk);
  CHECK(tiny.out.find("x_1_2 = 1") != std::string::npos);
  CHECK(run_cli({"export-ilp", "--instance", s(dir / "fig.json"), "--out", "/nonexistent-dir/a.lp"}).code == cli::kIoFailure);
}

TEST_CASE("gen-instance round trip on a small network") {
  const fs::path dir = uavr::testing::scratch_dir("cli_toy");
  write_text(dir / "params.json", R"({"num_uavs": 8, "area_side": 60})");
  bool found = false;
  for (int seed = 1; seed <= 20 && !found; ++seed) {
    const std::string net = s(dir / "net.json");
    REQUIRE(run_cli({"gen-network", "--params", s(dir / "params.json"), "--seed", std::to_string(seed), "--out", net}).code ==
            cli::kOk);
    const auto gi = run_cli({"gen-instance", "--network", net, "--flows", "4", "--retired", "2", "--seed", "5", "--out",
                             s(dir / "inst.json"), "--scenario-out", s(dir / "scenario.json")});
    if (gi.code != cli::kOk) continue;
    if (instance_from_json(read_json_file(s(dir / "inst.json"))).n() == 0) continue;
    found = true;

    const auto exact = run_cli({"schedule", "--instance", s(dir / "inst.json"), "--method", "exact", "--no-timing"});
    const auto brute = run_cli({"schedule", "--instance", s(dir / "inst.json"), "--method", "bruteforce", "--no-timing"});
    REQUIRE(exact.code == cli::kOk);
    REQUIRE(brute.code == cli::kOk);
    const Json e = Json::parse(exact.out), b = Json::parse(brute.out);
    CHECK(e["schedule"] == b["schedule"]);
    CHECK(e["energy_j"] == b["energy_j"]);

    // The saved scenario reproduces the instance without resampling.
    REQUIRE(run_cli({"gen-instance", "--network", s(dir / "scenario.json"), "--out", s(dir / "again.json")}).code == cli::kOk);
    CHECK(slurp(dir / "again.json") == slurp(dir / "inst.json"));
  }
  CHECK(found);

  CHECK(run_cli({"gen-instance", "--network", s(dir / "net.json"), "--flows", "4", "--out", s(dir / "x.json")}).code ==
        cli::kInvalidInput);
}

TEST_CASE("experiment and plot") {
  const fs::path dir = uavr::testing::scratch_dir("cli_exp");
  const std::string config = std::string(UAVR_SOURCE_DIR) + "/configs/desk.json";
  const auto run = [&](const std::string& tag, const std::string& threads) {
    return run_cli({"experiment", "--config", config, "--threads", threads, "--no-timing", "--csv", s(dir / (tag + ".csv")),
                    "--svg-energy", s(dir / (tag + "_e.svg")), "--svg-runtime", s(dir / (tag + "_r.svg"))});
  };
  REQUIRE(run("a", "1").code == cli::kOk);
  REQUIRE(run("b", "3").code == cli::kOk);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a_e.svg") == slurp(dir / "b_e.svg"));
  CHECK(slurp(dir / "a_r.svg") == slurp(dir / "b_r.svg"));

  const auto rows = read_csv(s(dir / "a.csv"));
  const ExperimentConfig desk = config_from_json(read_json_file(config));
  CHECK(rows.size() <= desk.m_list.size() * desk.n_flows_list.size() * desk.methods.size());
  CHECK_FALSE(rows.empty());

  SUBCASE("plot") {
    REQUIRE(run_cli({"plot", "--csv", s(dir / "a.csv"), "--metric", "energy", "--out", s(dir / "p1.svg")}).code == cli::kOk);
    REQUIRE(run_cli({"plot", "--csv", s(dir / "a.csv"), "--metric", "energy", "--out", s(dir / "p2.svg")}).code == cli::kOk);
    CHECK(slurp(dir / "p1.svg") == slurp(dir / "p2.svg"));
    CHECK(slurp(dir / "p1.svg") == slurp(dir / "a_e.svg"));
    write_text(dir / "empty.csv", std::string(kCsvHeader) + "\n");
    CHECK(run_cli({"plot", "--csv", s(dir / "empty.csv"), "--out", s(dir / "p3.svg")}).code == cli::kInvalidInput);
    CHECK(run_cli({"plot", "--csv", s(dir / "a.csv"), "--metric", "power", "--out", s(dir / "p4.svg")}).code ==
          cli::kInvalidInput);
  }
  SUBCASE("interrupted run keeps partial results") {
    std::atomic<bool> cancel{true};
    const auto r = run_cli({"experiment", "--config", config, "--no-timing", "--csv", s(dir / "c.csv")}, &cancel);
    CHECK(r.code == cli::kInterrupted);
    CHECK(fs::exists(dir / "c.csv.incomplete"));
    CHECK_FALSE(fs::exists(dir / "c.csv"));
  }
  SUBCASE("config errors") {
    write_text(dir / "bad.json", R"({"iterations": 1})");
    CHECK(run_cli({"experiment", "--config", s(dir / "bad.json"), "--csv", s(dir / "d.csv")}).code == cli::kInvalidInput);
  }
}
