#pragma once

// Meta-learners that pick the subset of arms the in-task policy is allowed
// to play: the expert-based greedy learners (OG, OG°, BOG) and the
// identification-based learners (G-BASS, E-BASS, EWA partial monitoring).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bss/base.hpp"
#include "bss/core.hpp"
#include "bss/experts.hpp"
#include "bss/game.hpp"

namespace bss {

/// Lower clamp applied to every exploration schedule.
inline constexpr double kMinProbability = 1e-6;

double clamp_probability(double p);

/// max(1, ceil(M ln N')).
int m_tilde(int m, int horizon);
/// min(1, (M~ K ln K / N')^{1/3}), clamped to [kMinProbability, 1].
double gamma_known(int m_tilde, int k, int horizon);
/// gamma_known with N' replaced by the 1-based segment index n.
double gamma_anytime(int m_tilde, int k, int n);
/// (tau / K)^{1/4} sqrt(ln K / N), clamped.
double ebass_schedule(double tau, int k, int n);
/// sqrt(|S_n| K tau / (N B_{tau,K})), clamped.
double gbass_general_schedule(std::size_t cover_size, int k, double tau, int n, double b_tau_k);

/// Greedy hitting set: repeatedly add the arm contained in the most
/// not-yet-hit sets (lowest index on ties). Empty members are rejected.
Subset greedy_cover(std::span<const Subset> sets);

// ---------------------------------------------------------------------------
// Online greedy over experts (full information and opaque feedback).

/// A monotone submodular set function with g(empty) = 0.
using SetFunction = std::function<double(const Subset&)>;

/// g(S) = f_max(r, S), and 0 on the empty set.
SetFunction max_reward_function(const RewardVector& r);

struct OgRound {
  std::vector<Arm> choices;  // a_1 .. a_M~ in expert order
  Subset played;
};

/// Full-information round: expert j is paid g(S_{j-1} + a) - g(S_{j-1}) for
/// every a. Payoffs must already lie in [0, 1].
OgRound og_round(std::vector<ExpertState>& experts, const SetFunction& g, Rng& rng);

struct OgoRound {
  std::vector<Arm> choices;
  Subset played;
  bool explored = false;
  int expert = -1;     // i - 1 when explored
  Arm probe = -1;      // a'_i when explored
  double payoff = 0.0;  // g(S_{n:i}) when explored
};

/// Opaque-feedback round. With probability gamma, picks i and a'_i uniformly,
/// plays S_{n:i} = {a_1..a_{i-1}, a'_i} and pays expert i g(S_{n:i}) at
/// a'_i; every other expert (and every expert on exploit rounds) receives the
/// zero vector.
OgoRound ogo_round(std::vector<ExpertState>& experts, double gamma, const SetFunction& g, Rng& rng);

/// (1 - 1/N') max_{|S| = M} sum_n g_n(S) - sum_n g_n(S_n), with g_n = f_max(r_n, .).
double coverage_regret(std::span<const RewardVector> rewards, std::span<const Subset> played, int m);

// ---------------------------------------------------------------------------
// Bandit-level learners. Each owns its state and plays one task (or segment)
// at a time.

enum class Mode { Exploit, Explore };

struct TaskPlay {
  double mean_reward = 0.0;  // sum over rounds of r(A_t)
  Mode mode = Mode::Exploit;
};

enum class GammaSchedule { KnownHorizon, Anytime, Fixed };

struct BogConfig {
  int num_arms = 1;
  int subset_size = 1;
  int num_segments = 1;   // N'
  int segment_length = 1;  // tau'
  GammaSchedule schedule = GammaSchedule::Anytime;
  double fixed_gamma = 0.1;
  BaseKind base = BaseKind::MOSS;
  NoiseModel noise;
};

struct SegmentResult {
  Mode mode = Mode::Exploit;
  Subset played;
  int expert = -1;
  Arm probe = -1;
  double payoff = 0.0;               // clipped average realized reward fed to the expert
  std::vector<double> piece_means;  // sum of r(A_t) per piece
  double realized = 0.0;
};

class BogLearner {
 public:
  explicit BogLearner(const BogConfig& config);

  int num_experts() const { return static_cast<int>(experts_.size()); }
  const std::vector<ExpertState>& experts() const { return experts_; }
  double gamma(int n) const;
  /// Runs one segment; base policy state persists across the pieces.
  SegmentResult run_segment(std::span<const TaskPiece> pieces, Rng& rng);
  TaskPlay play_task(const Task& task, Rng& rng);
  /// Most recently played set.
  const Subset& last_played() const { return last_played_; }

 private:
  BogConfig config_;
  std::vector<ExpertState> experts_;
  int segment_ = 0;
  Subset last_played_;
};

enum class GbassSchedule { MinimaxDP, GeneralFormula };

/// The model costs used by exploration schedules and the adversary:
/// C_info = B_{tau,K}, C_hit = B_{tau,M}, C_miss = tau (each capped by the next).
CostTriple schedule_costs(int k, int m, double tau, double c_b);

/// Knowledge of an identification-based learner: observed optimal sets and
/// the greedy cover that hits all of them.
class CoverKnowledge {
 public:
  void record(const Subset& optimal);
  std::span<const Subset> observed() const { return observed_; }
  const Subset& cover() const { return cover_; }
  const Subset& discovered() const { return discovered_; }
  std::size_t num_explorations() const { return observed_.size(); }

 private:
  std::vector<Subset> observed_;
  Subset cover_;
  Subset discovered_;
};

struct GbassConfig {
  int num_arms = 1;
  int subset_size = 1;  // M for the DP
  int num_tasks = 1;
  int task_length = 1;
  GbassSchedule schedule = GbassSchedule::MinimaxDP;
  double c_b = 1.0;
  double delta_task = 0.01;
  BaseKind base = BaseKind::MOSS;
  NoiseModel noise;
};

class GbassLearner {
 public:
  explicit GbassLearner(const GbassConfig& config);

  /// Exploration probability for 0-based task n given current knowledge.
  double schedule(int n) const;
  /// n is 0-based; n == 0 always explores.
  TaskPlay play_task(const Task& task, int n, Rng& rng);
  const CoverKnowledge& knowledge() const { return knowledge_; }

 private:
  GbassConfig config_;
  CoverKnowledge knowledge_;
  std::optional<ValueTable> table_;
};

/// Minimax exploration probability of a cover learner at (n, discovered).
double minimax_exploration(const ValueTable& table, int n, std::size_t discovered);

/// Active M-subset hypotheses as bitmasks in lexicographic order.
class HypothesisSet {
 public:
  HypothesisSet(int k, int m);

  std::size_t size() const { return masks_.size(); }
  std::size_t num_alive() const { return alive_count_; }
  bool alive(std::size_t i) const { return alive_[i] != 0; }
  std::uint64_t mask(std::size_t i) const { return masks_[i]; }
  /// Keeps hypotheses intersecting `optimal`. Returns false, and restores
  /// every hypothesis, if nothing would survive.
  bool filter(const Subset& optimal);
  bool filter_parallel(const Subset& optimal, int threads = 0);
  /// Uniform over alive hypotheses.
  Subset sample(Rng& rng) const;
  std::vector<Subset> alive_subsets() const;

 private:
  bool commit(std::size_t survivors);

  std::vector<std::uint64_t> masks_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::uint8_t> scratch_;
  std::size_t alive_count_ = 0;
};

struct EbassConfig {
  int num_arms = 1;
  int subset_size = 1;
  int num_tasks = 1;
  int task_length = 1;
  double delta_task = 0.01;
  BaseKind base = BaseKind::MOSS;
  NoiseModel noise;
};

class EbassLearner {
 public:
  explicit EbassLearner(const EbassConfig& config);

  double exploration_probability() const { return p_; }
  TaskPlay play_task(const Task& task, int n, Rng& rng);
  const HypothesisSet& hypotheses() const { return hypotheses_; }
  const Subset& discovered() const { return discovered_; }
  /// Identified sets since the last reset of the hypotheses.
  std::span<const Subset> observed() const { return observed_; }
  int fallback_events() const { return fallbacks_; }

 private:
  EbassConfig config_;
  HypothesisSet hypotheses_;
  Subset discovered_;
  std::vector<Subset> observed_;
  double p_;
  int fallbacks_ = 0;
};

enum class EwaPmMode { Agnostic, Realizable };

struct EwaPmTuning {
  double p = 1.0;
  double eta = 1.0;
};

/// Agnostic: p = (C_miss^2 ln Z / (C_info^2 N))^{1/3}, eta = (ln^2 Z / (C_info C_miss^2 N^2))^{1/3}.
/// Realizable: p = sqrt(C_miss ln Z / (C_info N)), eta = 1. p is clamped.
EwaPmTuning ewa_pm_tuning(EwaPmMode mode, double c_info, double c_miss, int n, double z);

/// Exponential weights over the Z M-subsets, learning only on explore rounds
/// from importance-weighted cost estimates (C_{i,S*} - C_hit) / p.
class EwaPmState {
 public:
  EwaPmState(int k, int m, double c_info, double c_hit, double c_miss, double p, double eta);

  std::size_t num_subsets() const { return masks_.size(); }
  double p() const { return p_; }
  double eta() const { return eta_; }
  std::uint64_t mask(std::size_t i) const { return masks_[i]; }
  double estimated_cost(std::size_t i) const { return estimated_[i]; }
  /// Q, normalized.
  std::vector<double> weights() const;

  bool draw_explore(Rng& rng) const { return rng.bernoulli(p_); }
  /// Adds (C_{i,S*} - C_hit)/p to every subset's estimated cost.
  void observe(const Subset& optimal);
  void observe_parallel(const Subset& optimal, int threads = 0);
  std::size_t sample(Rng& rng) const;
  double cost(std::size_t i, const Subset& optimal) const;

  double c_info() const { return c_info_; }
  double c_hit() const { return c_hit_; }
  double c_miss() const { return c_miss_; }

 private:
  void refresh_weights();

  std::vector<std::uint64_t> masks_;
  std::vector<double> estimated_;
  std::vector<double> q_;
  double c_info_, c_hit_, c_miss_;
  double p_, eta_;
};

struct EwaPmStep {
  Mode mode = Mode::Exploit;
  std::size_t chosen = 0;  // meaningful on exploit rounds
  double cost = 0.0;
};

/// One abstract round against a hidden optimal set.
EwaPmStep ewa_pm_round(EwaPmState& state, const Subset& hidden_optimal, Rng& rng);

struct EwaPmConfig {
  int num_arms = 1;
  int subset_size = 1;
  int num_tasks = 1;
  int task_length = 1;
  EwaPmMode mode = EwaPmMode::Realizable;
  double c_b = 1.0;
  double delta_task = 0.01;
  BaseKind base = BaseKind::MOSS;
  NoiseModel noise;
};

/// EWA partial monitoring played on bandit tasks: explore = phased
/// elimination on all arms, exploit = base policy on a subset drawn from Q.
class EwaPmLearner {
 public:
  explicit EwaPmLearner(const EwaPmConfig& config);
  TaskPlay play_task(const Task& task, int n, Rng& rng);
  const EwaPmState& state() const { return state_; }
  const Subset& discovered() const { return discovered_; }

 private:
  EwaPmConfig config_;
  EwaPmState state_;
  Subset discovered_;
};

}  // namespace bss
