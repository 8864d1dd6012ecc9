#pragma once

// In-task bandit policies restricted to a subset of arms, and the phased
// elimination best-arm-identification routine.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bss/core.hpp"

namespace bss {

enum class BaseKind { UCB, MOSS, EXP3 };

BaseKind parse_base_kind(const std::string& name);
std::string to_string(BaseKind kind);

/// A contiguous run of rounds under one mean-reward vector. A policy run may
/// span several pieces (a segment crossing task boundaries) without resetting.
struct TaskPiece {
  const RewardVector* rewards = nullptr;
  int length = 0;
};

/// Single-owner policy state over `restricted_to`, for a known horizon.
class BasePolicy {
 public:
  BasePolicy(BaseKind kind, Subset restricted_to, int horizon);

  BaseKind kind() const { return kind_; }
  const Subset& restricted_to() const { return arms_; }
  int rounds() const { return t_; }
  std::span<const int> pulls() const { return pulls_; }

  Arm select(Rng& rng);
  void update(Arm arm, double reward);

 private:
  int slot_of(Arm arm) const;

  BaseKind kind_;
  Subset arms_;
  int horizon_;
  int t_ = 0;
  std::vector<int> pulls_;
  std::vector<double> sums_;
  // EXP3 only
  std::vector<double> loss_estimates_;
  std::vector<double> probs_;
  double eta_ = 0.0;
};

struct BaseRun {
  std::vector<Arm> actions;
  std::vector<double> realized;
  double cumulative_realized = 0.0;
  /// sum of mean rewards of the played arms
  double cumulative_mean = 0.0;
};

/// Plays `policy` over the given pieces, appending to `out`.
void run_base(BasePolicy& policy, std::span<const TaskPiece> pieces, NoiseModel noise, Rng& rng, BaseRun& out);

/// Fresh policy of `kind` on `arms` for one task of length task.length.
BaseRun run_base(BaseKind kind, const Subset& arms, const Task& task, NoiseModel noise, Rng& rng);

struct BaiOutcome {
  Subset surviving;
  int rounds_used = 0;
  /// surviving ⊆ argmax set of the true means; false when the budget could
  /// not cover one pull per arm.
  bool succeeded = false;
  std::vector<Arm> actions;
  double cumulative_mean = 0.0;
};

/// Phased elimination over all arms of `rewards` within `budget` pulls.
///
/// Phase m has tolerance eps_m = 2^-m and raises each active arm to
/// ceil(8 sigma^2 ln(2 K m (m+1) / delta) / eps_m^2) cumulative pulls, where
/// sigma^2 is the noise's variance proxy (sigma^2 = 1/4 gives the classical
/// 2 ln(.)/eps^2 schedule). After each phase arm a is dropped when
///   mean_a + rad_a < max_b (mean_b - rad_b),  rad = sqrt(2 sigma^2 ln(2 K m (m+1)/delta) / n),
/// which at the phase target is the eps_m/2 elimination rule. If the next
/// phase does not fit the remaining budget, the remainder is spread
/// round-robin over the active arms and one last elimination is made.
BaiOutcome phased_elimination(const RewardVector& rewards, int budget, double delta, NoiseModel noise, Rng& rng);

/// c_B * sqrt(K * tau).
double regret_bound(double tau, double k, double c_b);

}  // namespace bss
