#pragma once

#include <span>
#include <vector>

#include "bss/core.hpp"

namespace bss {

/// Exponential-weights (randomized weighted majority) forecaster over K
/// actions, maximizing payoffs in [0, 1]. Sampling probabilities are
/// proportional to exp(eta * cumulative_payoff).
///
/// In anytime mode eta_t = sqrt(ln K / t) where t counts every update,
/// including all-zero ones; before the first update the distribution is
/// uniform whatever eta is.
class ExpertState {
 public:
  /// Anytime learning rate.
  explicit ExpertState(int num_actions);
  /// Fixed learning rate.
  ExpertState(int num_actions, double eta);

  int num_actions() const { return static_cast<int>(cumulative_.size()); }
  int rounds_seen() const { return rounds_; }
  bool anytime() const { return anytime_; }
  double learning_rate() const;
  std::span<const double> cumulative_payoffs() const { return cumulative_; }

  std::vector<double> probabilities() const;
  Arm advise(Rng& rng) const;
  /// Throws std::invalid_argument on length mismatch or entries outside [0, 1].
  void update(std::span<const double> payoff);
  /// Same as update() with e_arm * value; avoids building a dense vector.
  void update_single(Arm arm, double value);

 private:
  std::vector<double> cumulative_;
  double eta_ = 0.0;
  bool anytime_ = true;
  int rounds_ = 0;
};

/// max_a sum_n x^n_a - sum_n x^n_{chosen_n}.
double expert_regret(std::span<const std::vector<double>> payoffs, std::span<const Arm> chosen);

}  // namespace bss
