#include "bss/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace bss {

AdversaryMode parse_adversary_mode(const std::string& name) {
  if (name == "stochastic") return AdversaryMode::Stochastic;
  if (name == "oblivious") return AdversaryMode::Oblivious;
  if (name == "nonoblivious") return AdversaryMode::NonOblivious;
  throw ConfigError("unknown adversary mode '" + name + "' (expected stochastic|oblivious|nonoblivious)");
}

std::string to_string(AdversaryMode mode) {
  switch (mode) {
    case AdversaryMode::Stochastic: return "stochastic";
    case AdversaryMode::Oblivious: return "oblivious";
    case AdversaryMode::NonOblivious: return "nonoblivious";
  }
  return "?";
}

GapMode parse_gap_mode(const std::string& name) {
  if (name == "mingap") return GapMode::MinGap;
  if (name == "nogap") return GapMode::NoGap;
  throw ConfigError("unknown gap mode '" + name + "' (expected mingap|nogap)");
}

std::string to_string(GapMode mode) { return mode == GapMode::MinGap ? "mingap" : "nogap"; }

double EnvConfig::default_delta(int num_tasks, int task_length) {
  return 1.0 / (static_cast<double>(num_tasks) * static_cast<double>(task_length));
}

void EnvConfig::validate() const {
  if (num_arms < 1) throw ConfigError("env.K must be >= 1");
  if (subset_size < 1 || subset_size > num_arms) throw ConfigError("env.M must satisfy 1 <= M <= K");
  if (num_arms > 64) throw ConfigError("env.K must be <= 64");
  if (num_tasks < 1) throw ConfigError("env.N must be >= 1");
  if (task_length < 1) throw ConfigError("env.tau must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("env.delta must be in (0,1)");
  if (!(gap_constant > 0.0)) throw ConfigError("env.gap_constant must be positive");
  if (!(optimal_floor >= 0.0 && optimal_floor < 1.0)) throw ConfigError("env.optimal_floor must be in [0,1)");
  if (!(c_b > 0.0)) throw ConfigError("env.c_B must be positive");
}

Subset sample_optimal_pool(const EnvConfig& cfg, Rng& rng) {
  std::vector<Arm> arms(static_cast<std::size_t>(cfg.num_arms));
  for (Arm a = 0; a < cfg.num_arms; ++a) arms[static_cast<std::size_t>(a)] = a;
  // Partial Fisher-Yates: the first M slots are a uniform M-subset.
  for (int i = 0; i < cfg.subset_size; ++i) {
    const int j = i + rng.uniform_int(cfg.num_arms - i);
    std::swap(arms[static_cast<std::size_t>(i)], arms[static_cast<std::size_t>(j)]);
  }
  arms.resize(static_cast<std::size_t>(cfg.subset_size));
  return Subset(std::move(arms));
}

double min_gap(const EnvConfig& cfg) {
  const double raw = cfg.gap_constant *
                     std::sqrt(cfg.num_arms * std::log(cfg.num_tasks / cfg.delta) / cfg.task_length);
  return std::min(0.5, raw);
}

RewardVector draw_rewards(const EnvConfig& cfg, Arm best, double gap, Rng& rng) {
  const int k = cfg.num_arms;
  double top = rng.uniform(cfg.optimal_floor, 1.0);
  if (cfg.gap == GapMode::MinGap && k > 1) {
    int retries = 0;
    while (gap >= top) {
      if (++retries > 100) {
        throw ConfigError("MinGap infeasible: gap " + std::to_string(gap) +
                          " exceeds the optimal reward after 100 draws; lower gap_constant or raise optimal_floor");
      }
      top = rng.uniform(cfg.optimal_floor, 1.0);
    }
  }
  std::vector<double> r(static_cast<std::size_t>(k));
  const double ceiling = cfg.gap == GapMode::MinGap ? top - gap : top;
  for (Arm a = 0; a < k; ++a) {
    r[static_cast<std::size_t>(a)] = a == best ? top : rng.uniform(0.0, ceiling);
  }
  if (cfg.gap == GapMode::NoGap && k > 1) {
    Arm close = rng.uniform_int(k - 1);
    if (close >= best) ++close;
    r[static_cast<std::size_t>(close)] = rng.uniform(std::max(0.0, top - gap), top);
  }
  return RewardVector(std::move(r));
}

TaskStream::TaskStream(const EnvConfig& cfg, std::uint64_t run_seed)
    : cfg_(cfg), rng_(derive_seed(cfg.master_seed, run_seed)) {
  cfg_.validate();
  pool_ = sample_optimal_pool(cfg_, rng_);
  gap_ = min_gap(cfg_);
  if (cfg_.mode != AdversaryMode::Stochastic) {
    const CostTriple costs = schedule_costs(cfg_.num_arms, cfg_.subset_size, cfg_.task_length, cfg_.c_b);
    table_ = solve_cost_to_go(cfg_.num_tasks, cfg_.subset_size, costs);
  }
}

Arm TaskStream::pick_optimal(const Subset& known) {
  const auto uniform_from = [&](const Subset& s) {
    return s.arms()[static_cast<std::size_t>(rng_.uniform_int(static_cast<int>(s.size())))];
  };
  if (cfg_.mode == AdversaryMode::Stochastic) return uniform_from(pool_);

  const Subset inside = pool_.intersected(known);
  const Subset fresh = pool_.minus(known);
  const int s = static_cast<int>(std::min<std::size_t>(inside.size(), static_cast<std::size_t>(cfg_.subset_size)));
  const double q = table_->saddle(std::min(n_, cfg_.num_tasks - 1), s).q;
  if (rng_.bernoulli(q)) return uniform_from(fresh.empty() ? inside : fresh);
  return uniform_from(inside.empty() ? pool_ : inside);
}

GeneratedTask TaskStream::next(const Subset* learner_set) {
  Arm best = -1;
  switch (cfg_.mode) {
    case AdversaryMode::Stochastic:
      best = pick_optimal(pool_);
      break;
    case AdversaryMode::Oblivious:
      best = pick_optimal(imaginary_.discovered());
      break;
    case AdversaryMode::NonOblivious:
      if (learner_set == nullptr) throw std::invalid_argument("TaskStream: non-oblivious mode needs the learner's set");
      best = pick_optimal(*learner_set);
      break;
  }
  GeneratedTask out{Task{draw_rewards(cfg_, best, gap_, rng_), cfg_.task_length}, Subset({best})};

  if (cfg_.mode == AdversaryMode::Oblivious) {
    // The imaginary learner sees S*_n exactly whenever it explores.
    const std::size_t s = imaginary_.discovered().intersected(pool_).size();
    const bool explore = rng_.bernoulli(minimax_exploration(*table_, std::min(n_, cfg_.num_tasks - 1), s));
    if (explore || n_ == 0) imaginary_.record(out.optimal);
  }
  ++n_;
  return out;
}

GeneratedSequence gen_sequence(const EnvConfig& cfg, std::uint64_t run_seed, const LearnerFeedback& feedback) {
  if (cfg.mode == AdversaryMode::NonOblivious && !feedback) {
    throw std::invalid_argument("gen_sequence: non-oblivious mode requires a learner feedback channel");
  }
  if (cfg.mode != AdversaryMode::NonOblivious && feedback) {
    throw std::invalid_argument("gen_sequence: only the non-oblivious mode takes a feedback channel");
  }
  TaskStream stream(cfg, run_seed);
  GeneratedSequence out;
  out.pool = stream.optimal_pool();
  for (int n = 0; n < cfg.num_tasks; ++n) {
    std::optional<Subset> learner;
    if (feedback) learner = feedback(n);
    GeneratedTask t = stream.next(learner ? &*learner : nullptr);
    out.tasks.push_back(std::move(t.task));
    out.optimal.push_back(std::move(t.optimal));
  }
  return out;
}

void write_sequence_jsonl(const GeneratedSequence& seq, std::ostream& out) {
  for (std::size_t n = 0; n < seq.tasks.num_tasks(); ++n) {
    const Task& t = seq.tasks[n];
    nlohmann::json row;
    row["n"] = n + 1;
    row["tau"] = t.length;
    row["r"] = t.rewards.values();
    row["opt"] = seq.optimal[n].to_one_based();
    out << row.dump() << '\n';
  }
}

}  // namespace bss
