#pragma once

// Task-sequence generation for the three adversaries: stochastic, oblivious
// (tracks an imaginary cover learner, so the sequence can be pre-generated)
// and non-oblivious (peeks at the real learner's discovered arms).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bss/core.hpp"
#include "bss/game.hpp"
#include "bss/meta.hpp"

namespace bss {

enum class AdversaryMode { Stochastic, Oblivious, NonOblivious };
enum class GapMode { MinGap, NoGap };

AdversaryMode parse_adversary_mode(const std::string& name);
std::string to_string(AdversaryMode mode);
GapMode parse_gap_mode(const std::string& name);
std::string to_string(GapMode mode);

struct EnvConfig {
  int num_arms = 2;      // K
  int subset_size = 1;   // M
  int num_tasks = 1;     // N
  int task_length = 1;   // tau
  AdversaryMode mode = AdversaryMode::Stochastic;
  GapMode gap = GapMode::MinGap;
  double delta = 0.5;
  double gap_constant = 1.0;
  std::uint64_t master_seed = 0;
  NoiseModel noise;
  /// Lower end of the optimal arm's reward support; the upper end is 1.
  double optimal_floor = 0.5;
  /// c_B of the cost model the adversary's game is solved with.
  double c_b = 1.0;

  /// 1 / (N tau).
  static double default_delta(int num_tasks, int task_length);
  /// Throws ConfigError on the first broken invariant.
  void validate() const;
};

/// Uniform M-subset of [K].
Subset sample_optimal_pool(const EnvConfig& cfg, Rng& rng);

/// min(0.5, c * sqrt(K ln(N / delta) / tau)).
double min_gap(const EnvConfig& cfg);

struct GeneratedTask {
  Task task;
  Subset optimal;  // S*_n
};

/// Rewards for one task whose optimal arm is `best`. Throws ConfigError
/// if a MinGap task stays infeasible after 100 redraws of r(best).
RewardVector draw_rewards(const EnvConfig& cfg, Arm best, double gap, Rng& rng);

/// Learner's discovered arms just before task n (0-based) is generated.
using LearnerFeedback = std::function<Subset(int n)>;

/// Task-by-task generator. Everything random comes from one stream derived
/// from (master_seed, run_seed), so algorithms facing the same run seed see
/// the same environment whenever the adversary is not reactive.
class TaskStream {
 public:
  TaskStream(const EnvConfig& cfg, std::uint64_t run_seed);

  const EnvConfig& config() const { return cfg_; }
  const Subset& optimal_pool() const { return pool_; }
  double gap() const { return gap_; }
  int generated() const { return n_; }

  /// learner_set is required in NonOblivious mode and ignored otherwise.
  GeneratedTask next(const Subset* learner_set = nullptr);

 private:
  Arm pick_optimal(const Subset& known);

  EnvConfig cfg_;
  Rng rng_;
  Subset pool_;
  double gap_;
  int n_ = 0;
  std::optional<ValueTable> table_;
  // Imaginary learner of the oblivious adversary.
  CoverKnowledge imaginary_;
};

struct GeneratedSequence {
  TaskSequence tasks;
  std::vector<Subset> optimal;
  Subset pool;
};

/// Whole sequence at once. NonOblivious needs a feedback channel and throws
/// std::invalid_argument without one; other modes reject a channel.
GeneratedSequence gen_sequence(const EnvConfig& cfg, std::uint64_t run_seed,
                               const LearnerFeedback& feedback = nullptr);

/// One JSON object per line: {"n": 1-based, "tau": .., "r": [...], "opt": [1-based arms]}.
void write_sequence_jsonl(const GeneratedSequence& seq, std::ostream& out);

}  // namespace bss
