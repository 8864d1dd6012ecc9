#include "bss/base.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bss {

BaseKind parse_base_kind(const std::string& name) {
  if (name == "ucb") return BaseKind::UCB;
  if (name == "moss") return BaseKind::MOSS;
  if (name == "exp3") return BaseKind::EXP3;
  throw ConfigError("unknown base policy '" + name + "' (expected ucb|moss|exp3)");
}

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::UCB: return "ucb";
    case BaseKind::MOSS: return "moss";
    case BaseKind::EXP3: return "exp3";
  }
  return "?";
}

BasePolicy::BasePolicy(BaseKind kind, Subset restricted_to, int horizon)
    : kind_(kind), arms_(std::move(restricted_to)), horizon_(std::max(1, horizon)) {
  if (arms_.empty()) throw std::invalid_argument("BasePolicy: restricted set is empty");
  const std::size_t k = arms_.size();
  pulls_.assign(k, 0);
  sums_.assign(k, 0.0);
  if (kind_ == BaseKind::EXP3) {
    loss_estimates_.assign(k, 0.0);
    probs_.assign(k, 1.0 / static_cast<double>(k));
    const double kk = static_cast<double>(k);
    eta_ = std::sqrt(2.0 * std::log(kk) / (static_cast<double>(horizon_) * kk));
  }
}

int BasePolicy::slot_of(Arm arm) const {
  const auto arms = arms_.arms();
  auto it = std::lower_bound(arms.begin(), arms.end(), arm);
  if (it == arms.end() || *it != arm) throw std::invalid_argument("BasePolicy: arm outside restricted set");
  return static_cast<int>(it - arms.begin());
}

Arm BasePolicy::select(Rng& rng) {
  const auto arms = arms_.arms();
  const std::size_t k = arms.size();
  if (k == 1) return arms[0];

  if (kind_ == BaseKind::EXP3) {
    const double lo = *std::min_element(loss_estimates_.begin(), loss_estimates_.end());
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      probs_[i] = std::exp(-eta_ * (loss_estimates_[i] - lo));
      total += probs_[i];
    }
    for (double& p : probs_) p /= total;
    double u = rng.uniform();
    for (std::size_t i = 0; i < k; ++i) {
      u -= probs_[i];
      if (u < 0.0) return arms[i];
    }
    return arms[k - 1];
  }

  for (std::size_t i = 0; i < k; ++i) {
    if (pulls_[i] == 0) return arms[i];
  }
  const double t = static_cast<double>(t_ + 1);
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double n = pulls_[i];
    const double mean = sums_[i] / n;
    double bonus = 0.0;
    if (kind_ == BaseKind::UCB) {
      bonus = std::sqrt(2.0 * std::log(t) / n);
    } else {
      const double inside = static_cast<double>(horizon_) / (static_cast<double>(k) * n);
      bonus = std::sqrt(std::max(0.0, std::log(inside)) / n);
    }
    const double index = mean + bonus;
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return arms[best];
}

void BasePolicy::update(Arm arm, double reward) {
  const auto i = static_cast<std::size_t>(slot_of(arm));
  ++t_;
  ++pulls_[i];
  sums_[i] += reward;
  if (kind_ == BaseKind::EXP3 && arms_.size() > 1) {
    // Loss-based importance weighting on the reward clipped to [0, 1].
    const double x = std::clamp(reward, 0.0, 1.0);
    loss_estimates_[i] += (1.0 - x) / std::max(probs_[i], 1e-300);
  }
}

void run_base(BasePolicy& policy, std::span<const TaskPiece> pieces, NoiseModel noise, Rng& rng, BaseRun& out) {
  for (const TaskPiece& piece : pieces) {
    const RewardVector& r = *piece.rewards;
    for (int t = 0; t < piece.length; ++t) {
      const Arm a = policy.select(rng);
      const double x = sample_reward(r, a, noise, rng);
      policy.update(a, x);
      out.actions.push_back(a);
      out.realized.push_back(x);
      out.cumulative_realized += x;
      out.cumulative_mean += r[a];
    }
  }
}

BaseRun run_base(BaseKind kind, const Subset& arms, const Task& task, NoiseModel noise, Rng& rng) {
  BasePolicy policy(kind, arms, task.length);
  BaseRun out;
  out.actions.reserve(static_cast<std::size_t>(task.length));
  out.realized.reserve(static_cast<std::size_t>(task.length));
  const TaskPiece piece{&task.rewards, task.length};
  run_base(policy, std::span<const TaskPiece>(&piece, 1), noise, rng, out);
  return out;
}

BaiOutcome phased_elimination(const RewardVector& rewards, int budget, double delta, NoiseModel noise, Rng& rng) {
  const int k = rewards.num_arms();
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("phased_elimination: delta must be in (0,1)");

  BaiOutcome out;
  std::vector<Arm> all(static_cast<std::size_t>(k));
  for (Arm a = 0; a < k; ++a) all[static_cast<std::size_t>(a)] = a;
  const auto finish = [&](std::vector<Arm> active) {
    out.surviving = Subset(std::move(active));
    out.rounds_used = static_cast<int>(out.actions.size());
    out.succeeded = out.surviving.is_subset_of(Subset(rewards.argmax_set()));
    return out;
  };
  if (k == 1) return finish(all);
  if (budget < k) {
    out.surviving = Subset(all);
    out.succeeded = false;
    return out;
  }

  const double var = noise.variance_proxy();
  std::vector<int> pulls(static_cast<std::size_t>(k), 0);
  std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
  std::vector<Arm> active = all;
  int remaining = budget;

  const auto pull = [&](Arm a) {
    const double x = sample_reward(rewards, a, noise, rng);
    ++pulls[static_cast<std::size_t>(a)];
    sums[static_cast<std::size_t>(a)] += x;
    out.actions.push_back(a);
    out.cumulative_mean += rewards[a];
    --remaining;
  };
  const auto eliminate = [&](double log_term) {
    const auto radius = [&](Arm a) {
      return std::sqrt(2.0 * var * log_term / pulls[static_cast<std::size_t>(a)]);
    };
    const auto mean = [&](Arm a) { return sums[static_cast<std::size_t>(a)] / pulls[static_cast<std::size_t>(a)]; };
    double best_lower = -std::numeric_limits<double>::infinity();
    for (Arm a : active) best_lower = std::max(best_lower, mean(a) - radius(a));
    std::erase_if(active, [&](Arm a) { return mean(a) + radius(a) < best_lower; });
  };

  for (int m = 1;; ++m) {
    const double eps = std::ldexp(1.0, -m);
    const double log_term = std::log(2.0 * k * m * (m + 1.0) / delta);
    const int target = std::max(1, static_cast<int>(std::ceil(8.0 * var * log_term / (eps * eps))));
    long need = 0;
    for (Arm a : active) need += std::max(0, target - pulls[static_cast<std::size_t>(a)]);

    if (need > remaining) {
      // Spend what is left evenly, lowest-count arms first, then stop.
      while (remaining > 0) {
        Arm next = active.front();
        for (Arm a : active) {
          if (pulls[static_cast<std::size_t>(a)] < pulls[static_cast<std::size_t>(next)]) next = a;
        }
        pull(next);
      }
      eliminate(log_term);
      return finish(active);
    }
    // Interleave pulls so partial progress is balanced across arms.
    bool pending = true;
    while (pending) {
      pending = false;
      for (Arm a : active) {
        if (pulls[static_cast<std::size_t>(a)] < target) {
          pull(a);
          pending = pending || pulls[static_cast<std::size_t>(a)] < target;
        }
      }
    }
    eliminate(log_term);
    if (active.size() == 1 || remaining == 0) return finish(active);
  }
}

double regret_bound(double tau, double k, double c_b) {
  if (tau < 1.0 || k < 1.0) throw std::invalid_argument("regret_bound: tau and K must be >= 1");
  return c_b * std::sqrt(k * tau);
}

}  // namespace bss
