#include "bss/experts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bss {

ExpertState::ExpertState(int num_actions) : cumulative_(static_cast<std::size_t>(num_actions), 0.0) {
  if (num_actions < 1) throw std::invalid_argument("ExpertState: need at least one action");
}

ExpertState::ExpertState(int num_actions, double eta) : ExpertState(num_actions) {
  if (!(eta > 0.0)) throw std::invalid_argument("ExpertState: learning rate must be positive");
  eta_ = eta;
  anytime_ = false;
}

double ExpertState::learning_rate() const {
  if (!anytime_) return eta_;
  return std::sqrt(std::log(static_cast<double>(num_actions())) / std::max(1, rounds_));
}

std::vector<double> ExpertState::probabilities() const {
  const double eta = learning_rate();
  const double top = *std::max_element(cumulative_.begin(), cumulative_.end());
  std::vector<double> p(cumulative_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(eta * (cumulative_[i] - top));
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

Arm ExpertState::advise(Rng& rng) const {
  if (cumulative_.size() == 1) return 0;
  const std::vector<double> p = probabilities();
  double u = rng.uniform();
  for (std::size_t i = 0; i < p.size(); ++i) {
    u -= p[i];
    if (u < 0.0) return static_cast<Arm>(i);
  }
  return static_cast<Arm>(p.size() - 1);
}

void ExpertState::update(std::span<const double> payoff) {
  if (payoff.size() != cumulative_.size()) {
    throw std::invalid_argument("ExpertState::update: payoff length " + std::to_string(payoff.size()) +
                                " != " + std::to_string(cumulative_.size()));
  }
  for (double x : payoff) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("ExpertState::update: payoff " + std::to_string(x) + " outside [0,1]");
    }
  }
  for (std::size_t i = 0; i < payoff.size(); ++i) cumulative_[i] += payoff[i];
  ++rounds_;
}

void ExpertState::update_single(Arm arm, double value) {
  if (arm < 0 || arm >= num_actions()) throw std::invalid_argument("ExpertState::update_single: bad action");
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("ExpertState::update_single: payoff " + std::to_string(value) + " outside [0,1]");
  }
  cumulative_[static_cast<std::size_t>(arm)] += value;
  ++rounds_;
}

double expert_regret(std::span<const std::vector<double>> payoffs, std::span<const Arm> chosen) {
  if (payoffs.size() != chosen.size()) throw std::invalid_argument("expert_regret: histories not aligned");
  if (payoffs.empty()) return 0.0;
  std::vector<double> totals(payoffs.front().size(), 0.0);
  double earned = 0.0;
  for (std::size_t n = 0; n < payoffs.size(); ++n) {
    if (payoffs[n].size() != totals.size()) throw std::invalid_argument("expert_regret: ragged payoffs");
    for (std::size_t a = 0; a < totals.size(); ++a) totals[a] += payoffs[n][a];
    earned += payoffs[n][static_cast<std::size_t>(chosen[n])];
  }
  return *std::max_element(totals.begin(), totals.end()) - earned;
}

}  // namespace bss
