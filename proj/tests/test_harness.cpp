#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "bss/harness.hpp"
#include "bss/toml_lite.hpp"

using namespace bss;

namespace {

RunConfig parse(const std::string& text) { return parse_run_config(parse_toml(text)); }

const char* kSmall = R"(
seeds = [1, 2]
checkpoint_every = 4

[env]
K = 6
M = 2
N = 10
tau = 120

[[algorithms]]
kind = "moss"

[[algorithms]]
kind = "gbass"
)";

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config parsing fills defaults") {
  const RunConfig cfg = parse(kSmall);
  CHECK(cfg.env.num_arms == 6);
  CHECK(cfg.env.mode == AdversaryMode::Oblivious);
  CHECK(cfg.env.gap == GapMode::MinGap);
  CHECK(cfg.env.delta == doctest::Approx(1.0 / 1200));
  CHECK_FALSE(cfg.delta_explicit);
  CHECK(cfg.algorithms.size() == 2);
  CHECK(cfg.algorithms[1].label == "gbass");
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse("[env]\nK = 6\nM = 2\nN = 10\ntau = 5\nGamma = 1\n[[algorithms]]\nkind = \"moss\"\n"),
                       doctest::Contains("Gamma"), ConfigError);
  CHECK_THROWS_AS(parse("[env]\nK = 6\nM = 2\nN = 10\ntau = 5\n[[algorithms]]\nkind = \"bog\"\nschedule = \"sometimes\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[env]\nK = 6\nM = 2\nN = 10\ntau = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse("seeds = [1, 1]\n[env]\nK = 6\nM = 2\nN = 10\ntau = 5\n[[algorithms]]\nkind = \"moss\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse("[env]\nK = 6\nM = 2\nN = 10\ntau = 5\n[[algorithms]]\nkind = \"moss\"\n[[algorithms]]\nkind = \"moss\"\n"),
      ConfigError);
}

TEST_CASE("single task, single run") {
  RunConfig cfg = parse("seeds = [7]\n[env]\nK = 4\nM = 1\nN = 1\ntau = 50\n[[algorithms]]\nkind = \"moss\"\n");
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.runs.size() == 1);
  CHECK(res.runs[0].trace.checkpoints.size() == 1);
  CHECK(res.runs[0].trace.checkpoints[0].task == 1);
}

TEST_CASE("traces are non-negative and non-decreasing, row counts match") {
  RunConfig cfg = parse(kSmall);
  cfg.env.mode = AdversaryMode::Stochastic;
  const ExperimentResult res = run_experiment(cfg);
  for (const RunResult& run : res.runs) {
    double previous = 0.0;
    for (const Checkpoint& c : run.trace.checkpoints) {
      CHECK(c.cumulative_regret >= -1e-9);
      CHECK(c.cumulative_regret >= previous - 1e-9);
      previous = c.cumulative_regret;
    }
  }
  std::ostringstream csv;
  write_traces_csv(res, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("algo,seed,task,cum_regret\n", 0) == 0);
  // ceil(10 / 4) = 3 checkpoints (4, 8, 10) per run
  CHECK(count_lines(text) == 1 + 4 * 3);
  CHECK(text.find("moss,1,4,") != std::string::npos);
  CHECK(text.find("gbass,2,10,") != std::string::npos);
}

TEST_CASE("every algorithm runs against every adversary") {
  for (const char* mode : {"stochastic", "oblivious", "nonoblivious"}) {
    RunConfig cfg = parse(std::string("seeds = [3]\n[env]\nK = 6\nM = 2\nN = 8\ntau = 100\nmode = \"") + mode +
                          "\"\n"
                          "[[algorithms]]\nkind = \"bog\"\n[[algorithms]]\nkind = \"bog\"\nlabel = \"bog-known\"\n"
                          "schedule = \"known\"\nsegment_length = 70\n"
                          "[[algorithms]]\nkind = \"ogo\"\ngamma = 0.2\n[[algorithms]]\nkind = \"gbass\"\n"
                          "[[algorithms]]\nkind = \"gbass\"\nlabel = \"gbass-general\"\nschedule = \"general\"\n"
                          "[[algorithms]]\nkind = \"ebass\"\n[[algorithms]]\nkind = \"ewapm\"\nmode = \"agnostic\"\n"
                          "[[algorithms]]\nkind = \"moss\"\nbase = \"ucb\"\n[[algorithms]]\nkind = \"optmoss\"\n");
    const ExperimentResult res = run_experiment(cfg, {Execution::Serial, 1});
    CHECK(res.runs.size() == 9);
    for (const RunResult& r : res.runs) CHECK(r.trace.checkpoints.back().task == 8);
  }
}

TEST_CASE("serial and parallel execution produce identical files") {
  RunConfig cfg = parse(kSmall);
  cfg.algorithms.push_back(AlgorithmSpec{AlgoKind::OGo, "ogo"});
  auto render = [&](ExecOptions exec) {
    std::ostringstream out;
    const ExperimentResult res = run_experiment(cfg, exec);
    write_traces_csv(res, out);
    out << run_metadata(res).dump(2);
    return out.str();
  };
  const std::string serial = render({Execution::Serial, 1});
  CHECK(serial == render({Execution::Serial, 1}));
  CHECK(serial == render({Execution::Parallel, 4}));
  CHECK(serial == render({Execution::Parallel, 3}));
}

TEST_CASE("OG-o pilot picks a grid value") {
  RunConfig cfg = parse(kSmall);
  cfg.algorithms = {AlgorithmSpec{AlgoKind::OGo, "ogo"}};
  const RunConfig resolved = resolve_config(cfg);
  REQUIRE(resolved.algorithms[0].gamma.has_value());
  const auto grid = ogo_gamma_grid();
  CHECK(std::find(grid.begin(), grid.end(), *resolved.algorithms[0].gamma) != grid.end());
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(0.5));
}

TEST_CASE("metadata and files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "bss_harness_test";
  std::filesystem::remove_all(dir);
  RunConfig cfg = parse(kSmall);
  const ExperimentResult res = run_experiment(cfg);
  write_experiment(res, dir.string());
  dump_sequences(cfg, dir.string());
  CHECK(std::filesystem::exists(dir / "traces.csv"));
  CHECK(std::filesystem::exists(dir / "env_seed1.jsonl"));
  std::ifstream meta(dir / "run_meta.json");
  const auto j = nlohmann::json::parse(meta);
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("config").at("env").at("K") == 6);
  CHECK(j.at("runs").size() == 4);

  RunConfig reactive = cfg;
  reactive.env.mode = AdversaryMode::NonOblivious;
  CHECK_THROWS(dump_sequences(reactive, dir.string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps") {
  SweepSpec spec;
  spec.base = parse(kSmall);
  spec.parameter = SweepParam::N;
  spec.values = {6, 12};
  const SweepResult res = run_sweep(spec);
  CHECK(res.rows.size() == 8);
  CHECK(res.rows.front().value == 6);
  CHECK(res.rows.back().value == 12);
  CHECK(res.resolved[1].env.delta == doctest::Approx(1.0 / (12 * 120)));
  std::ostringstream csv;
  write_sweep_csv(res.rows, csv);
  CHECK(csv.str().rfind("param,value,algo,seed,final_regret\n", 0) == 0);
  CHECK(count_lines(csv.str()) == 9);

  RunConfig fixed = spec.base;
  fixed.env.delta = 0.01;
  fixed.delta_explicit = true;
  CHECK(with_parameter(fixed, SweepParam::Tau, 500).env.delta == 0.01);
  CHECK(with_parameter(spec.base, SweepParam::K, 9).env.num_arms == 9);
  CHECK_THROWS_AS(parse_sweep_param("Q"), ConfigError);
}
