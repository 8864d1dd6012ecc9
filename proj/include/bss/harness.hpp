#pragma once

// Experiment configuration, seeded execution of (algorithm, seed) runs and
// the CSV/JSON writers. Runs are independent, so the parallel executor only
// distributes whole runs; the output does not depend on the thread count.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bss/base.hpp"
#include "bss/core.hpp"
#include "bss/envgen.hpp"
#include "bss/meta.hpp"

namespace bss {

inline constexpr const char* kVersion = "0.1.0";

enum class AlgoKind { BOG, OGo, GBASS, EBASS, EWAPM, MOSS, OptMOSS };

AlgoKind parse_algo_kind(const std::string& name);
std::string to_string(AlgoKind kind);

struct AlgorithmSpec {
  AlgoKind kind = AlgoKind::MOSS;
  std::string label;  // defaults to the kind name
  BaseKind base = BaseKind::MOSS;
  // BOG
  GammaSchedule bog_schedule = GammaSchedule::Anytime;
  int segment_length = 0;  // 0 means tau
  // OGo: unset means "pick from the pilot grid"
  std::optional<double> gamma;
  // G-BASS
  GbassSchedule gbass_schedule = GbassSchedule::MinimaxDP;
  double c_b = 1.0;
  // EWA partial monitoring
  EwaPmMode ewa_mode = EwaPmMode::Realizable;
};

struct RunConfig {
  EnvConfig env;
  /// False when delta was left at its default 1/(N tau); sweeps recompute it.
  bool delta_explicit = false;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int checkpoint_every = 1;
  std::string output_dir = "results";

  void validate() const;
};

/// Builds a config from parsed TOML. Unknown keys are a ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Gamma grid searched for OGo when no gamma is configured.
std::vector<double> ogo_gamma_grid();

struct RunStats {
  int explorations = 0;
  int fallbacks = 0;  // E-BASS hypothesis-set resets
  double comparator_value = 0.0;
};

struct RunResult {
  RegretTrace trace;
  RunStats stats;
};

enum class Execution { Serial, Parallel };

struct ExecOptions {
  Execution mode = Execution::Parallel;
  int threads = 0;  // 0: OpenMP default
};

struct ExperimentResult {
  RunConfig resolved;  // OGo gammas filled in
  std::vector<RunResult> runs;  // algorithm order, then seed order
};

/// One (algorithm, seed) run. `spec` must be resolved (OGo gamma set).
RunResult run_single(const RunConfig& cfg, const AlgorithmSpec& spec, std::uint64_t seed);

/// Fills in OGo gammas by pilot runs on a seed derived from the master seed:
/// lowest final regret wins, the smaller gamma on ties.
RunConfig resolve_config(const RunConfig& cfg, const ExecOptions& exec = {});

ExperimentResult run_experiment(const RunConfig& cfg, const ExecOptions& exec = {});

/// Header algo,seed,task,cum_regret.
void write_traces_csv(const ExperimentResult& result, std::ostream& out);
nlohmann::json run_metadata(const ExperimentResult& result);
/// traces.csv and run_meta.json under `dir` (created if missing).
void write_experiment(const ExperimentResult& result, const std::string& dir);

/// One JSON-lines environment dump per seed under `dir` (non-reactive modes only).
void dump_sequences(const RunConfig& cfg, const std::string& dir);

enum class SweepParam { N, Tau, K, M };
SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam param);

struct SweepSpec {
  SweepParam parameter = SweepParam::N;
  std::vector<int> values;
  RunConfig base;
};

struct SweepRow {
  std::string param;
  int value = 0;
  std::string algo;
  std::uint64_t seed = 0;
  double final_regret = 0.0;
};

/// Copy of `cfg` with one parameter replaced; default delta is recomputed.
RunConfig with_parameter(const RunConfig& cfg, SweepParam param, int value);

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RunConfig> resolved;  // one per value
};

SweepResult run_sweep(const SweepSpec& spec, const ExecOptions& exec = {});
/// Header param,value,algo,seed,final_regret.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_sweep(const SweepSpec& spec, const SweepResult& result, const std::string& dir);

}  // namespace bss
