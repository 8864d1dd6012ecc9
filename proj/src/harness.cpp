#include "bss/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bss/toml_lite.hpp"

namespace bss {

using nlohmann::json;

AlgoKind parse_algo_kind(const std::string& name) {
  if (name == "bog") return AlgoKind::BOG;
  if (name == "ogo") return AlgoKind::OGo;
  if (name == "gbass") return AlgoKind::GBASS;
  if (name == "ebass") return AlgoKind::EBASS;
  if (name == "ewapm") return AlgoKind::EWAPM;
  if (name == "moss") return AlgoKind::MOSS;
  if (name == "optmoss") return AlgoKind::OptMOSS;
  throw ConfigError("unknown algorithm kind '" + name + "' (expected bog|ogo|gbass|ebass|ewapm|moss|optmoss)");
}

std::string to_string(AlgoKind kind) {
  switch (kind) {
    case AlgoKind::BOG: return "bog";
    case AlgoKind::OGo: return "ogo";
    case AlgoKind::GBASS: return "gbass";
    case AlgoKind::EBASS: return "ebass";
    case AlgoKind::EWAPM: return "ewapm";
    case AlgoKind::MOSS: return "moss";
    case AlgoKind::OptMOSS: return "optmoss";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

void reject_unknown(const json& table, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : table.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const json& table, const char* key, const std::string& where, T fallback) {
  if (!table.contains(key)) return fallback;
  const json& v = table.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
  } else {
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    const auto x = v.get<std::int64_t>();
    if constexpr (std::is_same_v<T, int>) {
      if (x < 0 || x > std::numeric_limits<int>::max()) throw ConfigError(where + "." + key + " is out of range");
    } else {
      if (x < 0) throw ConfigError(where + "." + key + " must be non-negative");
    }
    return static_cast<T>(x);
  }
}

GammaSchedule parse_bog_schedule(const std::string& s) {
  if (s == "known") return GammaSchedule::KnownHorizon;
  if (s == "anytime") return GammaSchedule::Anytime;
  throw ConfigError("unknown bog schedule '" + s + "' (expected known|anytime)");
}

GbassSchedule parse_gbass_schedule(const std::string& s) {
  if (s == "minimax") return GbassSchedule::MinimaxDP;
  if (s == "general") return GbassSchedule::GeneralFormula;
  throw ConfigError("unknown gbass schedule '" + s + "' (expected minimax|general)");
}

EwaPmMode parse_ewa_mode(const std::string& s) {
  if (s == "agnostic") return EwaPmMode::Agnostic;
  if (s == "realizable") return EwaPmMode::Realizable;
  throw ConfigError("unknown ewapm mode '" + s + "' (expected agnostic|realizable)");
}

AlgorithmSpec parse_algorithm(const json& t, std::size_t index) {
  const std::string where = "algorithms[" + std::to_string(index) + "]";
  if (!t.is_object()) throw ConfigError(where + " must be a table");
  if (!t.contains("kind")) throw ConfigError(where + " is missing 'kind'");
  AlgorithmSpec spec;
  spec.kind = parse_algo_kind(get<std::string>(t, "kind", where, ""));
  spec.label = get<std::string>(t, "label", where, to_string(spec.kind));
  if (spec.label.empty() || spec.label.find_first_of(",\"\n") != std::string::npos) {
    throw ConfigError(where + ".label must be non-empty and free of commas and quotes");
  }
  spec.base = parse_base_kind(get<std::string>(t, "base", where, "moss"));
  switch (spec.kind) {
    case AlgoKind::BOG:
      reject_unknown(t, {"kind", "label", "base", "schedule", "segment_length"}, where);
      spec.bog_schedule = parse_bog_schedule(get<std::string>(t, "schedule", where, "anytime"));
      spec.segment_length = get<int>(t, "segment_length", where, 0);
      break;
    case AlgoKind::OGo:
      reject_unknown(t, {"kind", "label", "base", "gamma"}, where);
      if (t.contains("gamma")) {
        const json& g = t.at("gamma");
        if (g.is_string() && g.get<std::string>() == "auto") {
          spec.gamma.reset();
        } else if (g.is_number()) {
          spec.gamma = g.get<double>();
          if (!(*spec.gamma > 0.0 && *spec.gamma <= 1.0)) throw ConfigError(where + ".gamma must be in (0,1]");
        } else {
          throw ConfigError(where + ".gamma must be a number or \"auto\"");
        }
      }
      break;
    case AlgoKind::GBASS:
      reject_unknown(t, {"kind", "label", "base", "schedule", "c_B"}, where);
      spec.gbass_schedule = parse_gbass_schedule(get<std::string>(t, "schedule", where, "minimax"));
      spec.c_b = get<double>(t, "c_B", where, 1.0);
      break;
    case AlgoKind::EWAPM:
      reject_unknown(t, {"kind", "label", "base", "mode", "c_B"}, where);
      spec.ewa_mode = parse_ewa_mode(get<std::string>(t, "mode", where, "realizable"));
      spec.c_b = get<double>(t, "c_B", where, 1.0);
      break;
    case AlgoKind::EBASS:
    case AlgoKind::MOSS:
    case AlgoKind::OptMOSS:
      reject_unknown(t, {"kind", "label", "base"}, where);
      break;
  }
  if (!(spec.c_b > 0.0)) throw ConfigError(where + ".c_B must be positive");
  return spec;
}

}  // namespace

void RunConfig::validate() const {
  env.validate();
  if (algorithms.empty()) throw ConfigError("config needs at least one algorithm");
  if (seeds.empty()) throw ConfigError("config needs at least one seed");
  if (checkpoint_every < 1) throw ConfigError("checkpoint_every must be >= 1");
  std::set<std::string> labels;
  for (const AlgorithmSpec& a : algorithms) {
    if (!labels.insert(a.label).second) throw ConfigError("duplicate algorithm label '" + a.label + "'");
  }
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) throw ConfigError("seeds must be distinct");
}

RunConfig parse_run_config(const json& doc) {
  reject_unknown(doc, {"seeds", "checkpoint_every", "output_dir", "env", "algorithms"}, "top level");
  RunConfig cfg;
  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    if (!s.is_array()) throw ConfigError("seeds must be an array of integers");
    cfg.seeds.clear();
    for (const json& x : s) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < 0) throw ConfigError("seeds must be non-negative integers");
      cfg.seeds.push_back(static_cast<std::uint64_t>(x.get<std::int64_t>()));
    }
  }
  cfg.checkpoint_every = get<int>(doc, "checkpoint_every", "top level", 1);
  cfg.output_dir = get<std::string>(doc, "output_dir", "top level", cfg.output_dir);

  if (!doc.contains("env") || !doc.at("env").is_object()) throw ConfigError("config needs an [env] table");
  const json& e = doc.at("env");
  reject_unknown(e, {"K", "M", "N", "tau", "mode", "gap", "delta", "gap_constant", "master_seed", "noise",
                     "optimal_floor", "c_B"},
                 "[env]");
  for (const char* key : {"K", "M", "N", "tau"}) {
    if (!e.contains(key)) throw ConfigError(std::string("[env] is missing '") + key + "'");
  }
  EnvConfig& env = cfg.env;
  env.num_arms = get<int>(e, "K", "env", 0);
  env.subset_size = get<int>(e, "M", "env", 0);
  env.num_tasks = get<int>(e, "N", "env", 0);
  env.task_length = get<int>(e, "tau", "env", 0);
  env.mode = parse_adversary_mode(get<std::string>(e, "mode", "env", "oblivious"));
  env.gap = parse_gap_mode(get<std::string>(e, "gap", "env", "mingap"));
  env.gap_constant = get<double>(e, "gap_constant", "env", 1.0);
  env.master_seed = get<std::uint64_t>(e, "master_seed", "env", 0);
  env.noise.kind = parse_noise_kind(get<std::string>(e, "noise", "env", "uniform"));
  env.optimal_floor = get<double>(e, "optimal_floor", "env", 0.5);
  env.c_b = get<double>(e, "c_B", "env", 1.0);
  cfg.delta_explicit = e.contains("delta");
  if (env.num_tasks < 1 || env.task_length < 1) throw ConfigError("env.N and env.tau must be >= 1");
  env.delta = cfg.delta_explicit ? get<double>(e, "delta", "env", 0.0)
                                 : EnvConfig::default_delta(env.num_tasks, env.task_length);

  if (!doc.contains("algorithms") || !doc.at("algorithms").is_array()) {
    throw ConfigError("config needs at least one [[algorithms]] entry");
  }
  const json& algos = doc.at("algorithms");
  for (std::size_t i = 0; i < algos.size(); ++i) cfg.algorithms.push_back(parse_algorithm(algos[i], i));
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(parse_toml_file(path)); }

json to_json(const RunConfig& cfg) {
  json out;
  out["seeds"] = cfg.seeds;
  out["checkpoint_every"] = cfg.checkpoint_every;
  out["output_dir"] = cfg.output_dir;
  const EnvConfig& e = cfg.env;
  out["env"] = {{"K", e.num_arms},
                {"M", e.subset_size},
                {"N", e.num_tasks},
                {"tau", e.task_length},
                {"mode", to_string(e.mode)},
                {"gap", to_string(e.gap)},
                {"delta", e.delta},
                {"gap_constant", e.gap_constant},
                {"master_seed", e.master_seed},
                {"noise", to_string(e.noise.kind)},
                {"optimal_floor", e.optimal_floor},
                {"c_B", e.c_b},
                {"min_gap", min_gap(e)}};
  json algos = json::array();
  for (const AlgorithmSpec& a : cfg.algorithms) {
    json j = {{"kind", to_string(a.kind)}, {"label", a.label}, {"base", to_string(a.base)}};
    switch (a.kind) {
      case AlgoKind::BOG:
        j["schedule"] = a.bog_schedule == GammaSchedule::KnownHorizon ? "known" : "anytime";
        j["segment_length"] = a.segment_length > 0 ? a.segment_length : e.task_length;
        break;
      case AlgoKind::OGo:
        j["gamma"] = a.gamma ? json(*a.gamma) : json("auto");
        break;
      case AlgoKind::GBASS:
        j["schedule"] = a.gbass_schedule == GbassSchedule::MinimaxDP ? "minimax" : "general";
        j["c_B"] = a.c_b;
        break;
      case AlgoKind::EWAPM:
        j["mode"] = a.ewa_mode == EwaPmMode::Agnostic ? "agnostic" : "realizable";
        j["c_B"] = a.c_b;
        break;
      default:
        break;
    }
    algos.push_back(std::move(j));
  }
  out["algorithms"] = std::move(algos);
  return out;
}

std::vector<double> ogo_gamma_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(0.05 * i);
  return grid;
}

// ---------------------------------------------------------------------------
// Single runs

namespace {

struct Recorder {
  std::vector<Task> tasks;
  std::vector<double> earned;
};

// Per-task comparator values tau_n * f_max(r_n, S) for the best M-subset S.
// Beyond the enumeration guard a realizable sequence still has an exact
// answer: any M-subset holding every task's optimum.
std::vector<double> comparator_values(const TaskSequence& seq, int m, double& total) {
  std::vector<double> per_task(seq.num_tasks());
  try {
    const BestSubset best = best_m_subset(seq, m);
    for (std::size_t n = 0; n < seq.num_tasks(); ++n) {
      per_task[n] = seq[n].length * f_max(seq[n].rewards, best.subset);
    }
    total = best.value;
    return per_task;
  } catch (const ResourceLimitError& err) {
    Subset optima;
    for (const Task& t : seq.tasks()) optima = optima.united(Subset(t.rewards.argmax_set()));
    if (optima.size() > static_cast<std::size_t>(m)) {
      throw ResourceLimitError(std::string(err.what()) + "; the sequence is not realizable, so no shortcut applies");
    }
    total = 0.0;
    for (std::size_t n = 0; n < seq.num_tasks(); ++n) {
      per_task[n] = seq[n].length * seq[n].rewards.max();
      total += per_task[n];
    }
    return per_task;
  }
}

RunResult assemble(const RunConfig& cfg, const AlgorithmSpec& spec, std::uint64_t seed, Recorder rec,
                   RunStats stats) {
  std::vector<double> earned = std::move(rec.earned);
  const TaskSequence seq(std::move(rec.tasks));
  const std::vector<double> comp = comparator_values(seq, cfg.env.subset_size, stats.comparator_value);
  RunResult out;
  out.trace.algorithm = spec.label;
  out.trace.seed = seed;
  out.stats = stats;
  double cumulative = 0.0;
  const int n_tasks = static_cast<int>(seq.num_tasks());
  for (int n = 1; n <= n_tasks; ++n) {
    cumulative += comp[static_cast<std::size_t>(n - 1)] - earned[static_cast<std::size_t>(n - 1)];
    if (n % cfg.checkpoint_every == 0 || n == n_tasks) out.trace.checkpoints.push_back({n, cumulative});
  }
  return out;
}

Subset all_arms(int k) {
  std::vector<Arm> arms(static_cast<std::size_t>(k));
  for (Arm a = 0; a < k; ++a) arms[static_cast<std::size_t>(a)] = a;
  return Subset(std::move(arms));
}

RunResult run_segmented(const RunConfig& cfg, const AlgorithmSpec& spec, std::uint64_t seed, TaskStream& stream,
                        Rng& rng) {
  const EnvConfig& env = cfg.env;
  const int tau = env.task_length;
  const std::int64_t total = static_cast<std::int64_t>(env.num_tasks) * tau;
  const int seg_len = spec.kind == AlgoKind::OGo || spec.segment_length <= 0 ? tau : spec.segment_length;
  const auto segments = static_cast<int>((total + seg_len - 1) / seg_len);

  BogConfig bc;
  bc.num_arms = env.num_arms;
  bc.subset_size = env.subset_size;
  bc.num_segments = segments;
  bc.segment_length = seg_len;
  bc.base = spec.base;
  bc.noise = env.noise;
  if (spec.kind == AlgoKind::OGo) {
    if (!spec.gamma) throw std::logic_error("run_single: OGo gamma must be resolved first");
    bc.schedule = GammaSchedule::Fixed;
    bc.fixed_gamma = *spec.gamma;
  } else {
    bc.schedule = spec.bog_schedule;
  }
  BogLearner learner(bc);

  Recorder rec;
  // Pieces point into rec.tasks, so it must never reallocate.
  rec.tasks.reserve(static_cast<std::size_t>(env.num_tasks));
  RunStats stats;
  int offset = tau;
  std::int64_t played = 0;
  for (int s = 0; s < segments; ++s) {
    std::int64_t need = std::min<std::int64_t>(seg_len, total - played);
    std::vector<TaskPiece> pieces;
    std::vector<std::size_t> owner;
    while (need > 0) {
      if (offset == tau) {
        GeneratedTask g = stream.next(&learner.last_played());
        rec.tasks.push_back(std::move(g.task));
        rec.earned.push_back(0.0);
        offset = 0;
      }
      const int len = static_cast<int>(std::min<std::int64_t>(need, tau - offset));
      pieces.push_back({&rec.tasks.back().rewards, len});
      owner.push_back(rec.tasks.size() - 1);
      offset += len;
      need -= len;
    }
    const SegmentResult r = learner.run_segment(pieces, rng);
    for (std::size_t i = 0; i < owner.size(); ++i) rec.earned[owner[i]] += r.piece_means[i];
    if (r.mode == Mode::Explore) ++stats.explorations;
    played += seg_len;
  }
  return assemble(cfg, spec, seed, std::move(rec), stats);
}

}  // namespace

RunResult run_single(const RunConfig& cfg, const AlgorithmSpec& spec, std::uint64_t seed) {
  const EnvConfig& env = cfg.env;
  TaskStream stream(env, seed);
  Rng rng(derive_seed(env.master_seed, label_hash(spec.label), seed));
  if (spec.kind == AlgoKind::BOG || spec.kind == AlgoKind::OGo) return run_segmented(cfg, spec, seed, stream, rng);

  const double delta_task = env.delta / env.num_tasks;
  Recorder rec;
  rec.tasks.reserve(static_cast<std::size_t>(env.num_tasks));
  RunStats stats;
  const auto next = [&](const Subset& known) -> const Task& {
    GeneratedTask g = stream.next(&known);
    rec.tasks.push_back(std::move(g.task));
    rec.earned.push_back(0.0);
    return rec.tasks.back();
  };
  const auto record = [&](const TaskPlay& play) {
    rec.earned.back() = play.mean_reward;
    if (play.mode == Mode::Explore) ++stats.explorations;
  };

  switch (spec.kind) {
    case AlgoKind::MOSS: {
      const Subset arms = all_arms(env.num_arms);
      const Subset nothing;
      for (int n = 0; n < env.num_tasks; ++n) {
        const Task& t = next(nothing);
        rec.earned.back() = run_base(spec.base, arms, t, env.noise, rng).cumulative_mean;
      }
      break;
    }
    case AlgoKind::OptMOSS: {
      const Subset pool = stream.optimal_pool();
      for (int n = 0; n < env.num_tasks; ++n) {
        const Task& t = next(pool);
        rec.earned.back() = run_base(spec.base, pool, t, env.noise, rng).cumulative_mean;
      }
      break;
    }
    case AlgoKind::GBASS: {
      GbassConfig gc{env.num_arms, env.subset_size, env.num_tasks, env.task_length, spec.gbass_schedule,
                     spec.c_b,     delta_task,      spec.base,     env.noise};
      GbassLearner learner(gc);
      for (int n = 0; n < env.num_tasks; ++n) {
        const Task& t = next(learner.knowledge().discovered());
        record(learner.play_task(t, n, rng));
      }
      break;
    }
    case AlgoKind::EBASS: {
      EbassConfig ec{env.num_arms, env.subset_size, env.num_tasks, env.task_length, delta_task, spec.base, env.noise};
      EbassLearner learner(ec);
      for (int n = 0; n < env.num_tasks; ++n) {
        const Task& t = next(learner.discovered());
        record(learner.play_task(t, n, rng));
      }
      stats.fallbacks = learner.fallback_events();
      break;
    }
    case AlgoKind::EWAPM: {
      EwaPmConfig wc{env.num_arms, env.subset_size, env.num_tasks, env.task_length, spec.ewa_mode,
                     spec.c_b,     delta_task,      spec.base,     env.noise};
      EwaPmLearner learner(wc);
      for (int n = 0; n < env.num_tasks; ++n) {
        const Task& t = next(learner.discovered());
        record(learner.play_task(t, n, rng));
      }
      break;
    }
    case AlgoKind::BOG:
    case AlgoKind::OGo:
      break;
  }
  return assemble(cfg, spec, seed, std::move(rec), stats);
}

// ---------------------------------------------------------------------------
// Execution

namespace {

template <typename F>
void for_each_job(std::size_t count, const ExecOptions& exec, F&& job) {
  if (exec.mode == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      job(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  // First failure in job order, independent of scheduling.
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double final_regret(const RunResult& r) { return r.trace.checkpoints.back().cumulative_regret; }

}  // namespace

RunConfig resolve_config(const RunConfig& cfg, const ExecOptions& exec) {
  RunConfig out = cfg;
  const std::vector<double> grid = ogo_gamma_grid();
  for (AlgorithmSpec& spec : out.algorithms) {
    if (spec.kind != AlgoKind::OGo || spec.gamma) continue;
    const std::uint64_t pilot_seed = derive_seed(cfg.env.master_seed, label_hash("ogo-pilot"));
    std::vector<double> scores(grid.size());
    for_each_job(grid.size(), exec, [&](std::size_t i) {
      AlgorithmSpec trial = spec;
      trial.gamma = grid[i];
      scores[i] = final_regret(run_single(cfg, trial, pilot_seed));
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (scores[i] < scores[best]) best = i;
    }
    spec.gamma = grid[best];
  }
  return out;
}

ExperimentResult run_experiment(const RunConfig& cfg, const ExecOptions& exec) {
  cfg.validate();
  ExperimentResult out;
  out.resolved = resolve_config(cfg, exec);
  const std::size_t n_seeds = cfg.seeds.size();
  out.runs.resize(out.resolved.algorithms.size() * n_seeds);
  for_each_job(out.runs.size(), exec, [&](std::size_t i) {
    out.runs[i] = run_single(out.resolved, out.resolved.algorithms[i / n_seeds], cfg.seeds[i % n_seeds]);
  });
  return out;
}

namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  // Avoid "-0.000000" for tiny negative rounding noise.
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

}  // namespace

void write_traces_csv(const ExperimentResult& result, std::ostream& out) {
  out << "algo,seed,task,cum_regret\n";
  for (const RunResult& r : result.runs) {
    for (const Checkpoint& c : r.trace.checkpoints) {
      out << r.trace.algorithm << ',' << r.trace.seed << ',' << c.task << ',' << fixed6(c.cumulative_regret) << '\n';
    }
  }
}

json run_metadata(const ExperimentResult& result) {
  json runs = json::array();
  for (const RunResult& r : result.runs) {
    runs.push_back({{"algo", r.trace.algorithm},
                    {"seed", r.trace.seed},
                    {"final_regret", final_regret(r)},
                    {"comparator_value", r.stats.comparator_value},
                    {"explorations", r.stats.explorations},
                    {"hypothesis_resets", r.stats.fallbacks}});
  }
  return {{"version", kVersion}, {"config", to_json(result.resolved)}, {"runs", std::move(runs)}};
}

void write_experiment(const ExperimentResult& result, const std::string& dir) {
  ensure_dir(dir);
  std::ostringstream csv;
  write_traces_csv(result, csv);
  write_file(dir + "/traces.csv", csv.str());
  write_file(dir + "/run_meta.json", run_metadata(result).dump(2) + "\n");
}

void dump_sequences(const RunConfig& cfg, const std::string& dir) {
  if (cfg.env.mode == AdversaryMode::NonOblivious) {
    throw ConfigError("non-oblivious sequences depend on the learner and cannot be dumped up front");
  }
  ensure_dir(dir);
  for (std::uint64_t seed : cfg.seeds) {
    std::ostringstream out;
    write_sequence_jsonl(gen_sequence(cfg.env, seed), out);
    write_file(dir + "/env_seed" + std::to_string(seed) + ".jsonl", out.str());
  }
}

// ---------------------------------------------------------------------------
// Sweeps

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "N") return SweepParam::N;
  if (name == "tau") return SweepParam::Tau;
  if (name == "K") return SweepParam::K;
  if (name == "M") return SweepParam::M;
  throw ConfigError("unknown sweep parameter '" + name + "' (expected N|tau|K|M)");
}

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::N: return "N";
    case SweepParam::Tau: return "tau";
    case SweepParam::K: return "K";
    case SweepParam::M: return "M";
  }
  return "?";
}

RunConfig with_parameter(const RunConfig& cfg, SweepParam param, int value) {
  RunConfig out = cfg;
  switch (param) {
    case SweepParam::N: out.env.num_tasks = value; break;
    case SweepParam::Tau: out.env.task_length = value; break;
    case SweepParam::K: out.env.num_arms = value; break;
    case SweepParam::M: out.env.subset_size = value; break;
  }
  if (out.env.num_tasks < 1 || out.env.task_length < 1) {
    throw ConfigError("sweep value " + std::to_string(value) + " for " + to_string(param) + " must be >= 1");
  }
  if (!out.delta_explicit) out.env.delta = EnvConfig::default_delta(out.env.num_tasks, out.env.task_length);
  out.validate();
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const ExecOptions& exec) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  SweepResult out;
  for (int v : spec.values) out.resolved.push_back(resolve_config(with_parameter(spec.base, spec.parameter, v), exec));

  const std::size_t n_algos = spec.base.algorithms.size();
  const std::size_t n_seeds = spec.base.seeds.size();
  const std::size_t per_value = n_algos * n_seeds;
  out.rows.resize(spec.values.size() * per_value);
  for_each_job(out.rows.size(), exec, [&](std::size_t i) {
    const std::size_t v = i / per_value;
    const std::size_t a = (i % per_value) / n_seeds;
    const std::size_t s = i % n_seeds;
    const RunConfig& cfg = out.resolved[v];
    const RunResult r = run_single(cfg, cfg.algorithms[a], cfg.seeds[s]);
    out.rows[i] = {to_string(spec.parameter), spec.values[v], r.trace.algorithm, r.trace.seed, final_regret(r)};
  });
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "param,value,algo,seed,final_regret\n";
  for (const SweepRow& r : rows) {
    out << r.param << ',' << r.value << ',' << r.algo << ',' << r.seed << ',' << fixed6(r.final_regret) << '\n';
  }
}

void write_sweep(const SweepSpec& spec, const SweepResult& result, const std::string& dir) {
  ensure_dir(dir);
  std::ostringstream csv;
  write_sweep_csv(result.rows, csv);
  write_file(dir + "/sweep.csv", csv.str());
  json configs = json::array();
  for (const RunConfig& c : result.resolved) configs.push_back(to_json(c));
  const json meta = {{"version", kVersion},
                     {"param", to_string(spec.parameter)},
                     {"values", spec.values},
                     {"configs", std::move(configs)}};
  write_file(dir + "/sweep_meta.json", meta.dump(2) + "\n");
}

}  // namespace bss
