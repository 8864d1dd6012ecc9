// bss: run experiments and sweeps from TOML configs, print cost-to-go
// tables, and run the property/oracle suite.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bss/game.hpp"
#include "bss/harness.hpp"
#include "bss/verify.hpp"

namespace {

bss::ExecOptions exec_options(int threads, bool serial) {
  bss::ExecOptions exec;
  exec.mode = serial ? bss::Execution::Serial : bss::Execution::Parallel;
  exec.threads = threads;
  return exec;
}

std::vector<int> parse_values(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw bss::ConfigError("bad sweep value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw bss::ConfigError("--values needs at least one value");
  return out;
}

int cmd_run(const std::string& config, const std::string& out, int threads, bool serial, bool dump_env) {
  bss::RunConfig cfg = bss::load_run_config(config);
  if (!out.empty()) cfg.output_dir = out;
  if (dump_env) bss::dump_sequences(cfg, cfg.output_dir);
  const bss::ExperimentResult result = bss::run_experiment(cfg, exec_options(threads, serial));
  bss::write_experiment(result, cfg.output_dir);
  std::cout << "wrote " << cfg.output_dir << "/traces.csv (" << result.runs.size() << " runs)\n";
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& param, const std::string& values, const std::string& out,
              int threads, bool serial) {
  bss::SweepSpec spec;
  spec.base = bss::load_run_config(config);
  spec.parameter = bss::parse_sweep_param(param);
  spec.values = parse_values(values);
  const std::string dir = out.empty() ? spec.base.output_dir : out;
  const bss::SweepResult result = bss::run_sweep(spec, exec_options(threads, serial));
  bss::write_sweep(spec, result, dir);
  std::cout << "wrote " << dir << "/sweep.csv (" << result.rows.size() << " rows)\n";
  return 0;
}

int cmd_dp(int n, int m, double cinfo, double chit, double cmiss) {
  const bss::ValueTable table = bss::solve_cost_to_go(n, m, bss::CostTriple::constant(cinfo, chit, cmiss, m));
  std::printf("n,s,V,G,p,q\n");
  for (int i = 0; i <= n; ++i) {
    for (int s = 0; s <= m; ++s) {
      const double g = s < m ? table.gap(i, s) : 0.0;
      const bss::SaddlePoint sp = i < n ? bss::saddle_point(table, i, s) : bss::SaddlePoint{};
      std::printf("%d,%d,%.10g,%.10g,%.10g,%.10g\n", i, s, table.value(i, s), g, sp.p, sp.q);
    }
  }
  return 0;
}

int cmd_verify(bool quick) {
  int failed = 0;
  for (const auto& check : bss::verify::acceptance_checks()) {
    const auto r = bss::verify::run_check(check, quick);
    std::printf("%s %-26s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit subset selection: experiments, cost-to-go tables and checks"};
  app.set_version_flag("--version", std::string(bss::kVersion));
  app.require_subcommand(1);

  std::string config, out, param, values;
  int threads = 0;
  bool serial = false, dump_env = false, quick = false;

  auto* run = app.add_subcommand("run", "Run every (algorithm, seed) pair of a config");
  run->add_option("--config", config, "TOML run config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides output_dir)");
  run->add_option("--threads", threads, "Worker threads, 0 for the OpenMP default")->check(CLI::NonNegativeNumber);
  run->add_flag("--serial", serial, "Run without OpenMP");
  run->add_flag("--dump-env", dump_env, "Also write each seed's task sequence as JSON lines");

  auto* sweep = app.add_subcommand("sweep", "Repeat a config over values of one parameter");
  sweep->add_option("--config", config, "TOML run config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "N, tau, K or M")->required()->check(CLI::IsMember({"N", "tau", "K", "M"}));
  sweep->add_option("--values", values, "Comma-separated integers")->required();
  sweep->add_option("--out", out, "Output directory (overrides output_dir)");
  sweep->add_option("--threads", threads, "Worker threads, 0 for the OpenMP default")->check(CLI::NonNegativeNumber);
  sweep->add_flag("--serial", serial, "Run without OpenMP");

  int n = 0, m = 0;
  double cinfo = 0, chit = 0, cmiss = 0;
  auto* dp = app.add_subcommand("dp", "Print the cost-to-go table as CSV");
  dp->add_option("--N", n, "Number of tasks")->required()->check(CLI::PositiveNumber);
  dp->add_option("--M", m, "Number of optimal arms")->required()->check(CLI::PositiveNumber);
  dp->add_option("--cinfo", cinfo, "Exploration cost")->required();
  dp->add_option("--chit", chit, "Exploitation cost when the optimal arm is covered")->required();
  dp->add_option("--cmiss", cmiss, "Exploitation cost when it is not")->required();

  auto* verify = app.add_subcommand("verify", "Run the property and oracle checks");
  verify->add_flag("--quick", quick, "Smaller sample counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out, threads, serial, dump_env);
    if (*sweep) return cmd_sweep(config, param, values, out, threads, serial);
    if (*dp) return cmd_dp(n, m, cinfo, chit, cmiss);
    if (*verify) return cmd_verify(quick);
  } catch (const bss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
