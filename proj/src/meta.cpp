#include "bss/meta.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bss {

double clamp_probability(double p) {
  if (std::isnan(p)) return 1.0;
  return std::clamp(p, kMinProbability, 1.0);
}

int m_tilde(int m, int horizon) {
  if (m < 1 || horizon < 1) throw std::invalid_argument("m_tilde: M and N' must be >= 1");
  const double raw = std::ceil(m * std::log(static_cast<double>(horizon)));
  return std::max(1, static_cast<int>(raw));
}

double gamma_known(int m_tilde_value, int k, int horizon) {
  if (m_tilde_value < 1 || k < 1 || horizon < 1) throw std::invalid_argument("gamma: arguments must be >= 1");
  const double base = m_tilde_value * k * std::log(static_cast<double>(k)) / horizon;
  return clamp_probability(std::cbrt(base));
}

double gamma_anytime(int m_tilde_value, int k, int n) { return gamma_known(m_tilde_value, k, n); }

double ebass_schedule(double tau, int k, int n) {
  if (tau < 1.0 || k < 1 || n < 1) throw std::invalid_argument("ebass_schedule: arguments must be >= 1");
  return clamp_probability(std::pow(tau / k, 0.25) * std::sqrt(std::log(static_cast<double>(k)) / n));
}

double gbass_general_schedule(std::size_t cover_size, int k, double tau, int n, double b_tau_k) {
  return clamp_probability(std::sqrt(static_cast<double>(cover_size) * k * tau / (n * b_tau_k)));
}

Subset greedy_cover(std::span<const Subset> sets) {
  Arm max_arm = -1;
  for (const Subset& s : sets) {
    if (s.empty()) throw std::invalid_argument("greedy_cover: cannot hit an empty set");
    max_arm = std::max(max_arm, s.max_arm());
  }
  std::vector<std::uint8_t> hit(sets.size(), 0);
  std::size_t unhit = sets.size();
  std::vector<Arm> cover;
  std::vector<int> counts(static_cast<std::size_t>(max_arm + 1));
  while (unhit > 0) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (hit[i]) continue;
      for (Arm a : sets[i].arms()) ++counts[static_cast<std::size_t>(a)];
    }
    const Arm best = static_cast<Arm>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    cover.push_back(best);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (!hit[i] && sets[i].contains(best)) {
        hit[i] = 1;
        --unhit;
      }
    }
  }
  return Subset(std::move(cover));
}

SetFunction max_reward_function(const RewardVector& r) {
  return [r](const Subset& s) { return s.empty() ? 0.0 : f_max(r, s); };
}

namespace {

void check_payoff_range(double x) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    throw std::invalid_argument("online greedy: marginal gain " + std::to_string(x) +
                                " outside [0,1]; pre-scale the oracle");
  }
}

std::vector<Arm> collect_choices(const std::vector<ExpertState>& experts, Rng& rng) {
  std::vector<Arm> choices;
  choices.reserve(experts.size());
  for (const ExpertState& e : experts) choices.push_back(e.advise(rng));
  return choices;
}

void feed_zero(std::vector<ExpertState>& experts, std::size_t except) {
  for (std::size_t j = 0; j < experts.size(); ++j) {
    if (j != except) experts[j].update_single(0, 0.0);
  }
}

}  // namespace

OgRound og_round(std::vector<ExpertState>& experts, const SetFunction& g, Rng& rng) {
  OgRound out;
  out.choices = collect_choices(experts, rng);
  Subset prefix;
  double prefix_value = g(prefix);
  for (std::size_t j = 0; j < experts.size(); ++j) {
    const int k = experts[j].num_actions();
    std::vector<double> payoff(static_cast<std::size_t>(k));
    for (Arm a = 0; a < k; ++a) {
      const double gain = g(prefix.with(a)) - prefix_value;
      check_payoff_range(gain);
      payoff[static_cast<std::size_t>(a)] = std::clamp(gain, 0.0, 1.0);
    }
    experts[j].update(payoff);
    prefix = prefix.with(out.choices[j]);
    prefix_value = g(prefix);
  }
  out.played = prefix;
  return out;
}

OgoRound ogo_round(std::vector<ExpertState>& experts, double gamma, const SetFunction& g, Rng& rng) {
  OgoRound out;
  out.choices = collect_choices(experts, rng);
  out.explored = rng.bernoulli(gamma);
  if (!out.explored) {
    out.played = Subset(out.choices);
    feed_zero(experts, experts.size());
    return out;
  }
  const int i = rng.uniform_int(static_cast<int>(experts.size()));
  const Arm probe = rng.uniform_int(experts[static_cast<std::size_t>(i)].num_actions());
  std::vector<Arm> arms(out.choices.begin(), out.choices.begin() + i);
  arms.push_back(probe);
  out.played = Subset(std::move(arms));
  out.expert = i;
  out.probe = probe;
  out.payoff = g(out.played);
  check_payoff_range(out.payoff);
  experts[static_cast<std::size_t>(i)].update_single(probe, std::clamp(out.payoff, 0.0, 1.0));
  feed_zero(experts, static_cast<std::size_t>(i));
  return out;
}

double coverage_regret(std::span<const RewardVector> rewards, std::span<const Subset> played, int m) {
  if (rewards.size() != played.size()) throw std::invalid_argument("coverage_regret: histories not aligned");
  if (rewards.empty()) return 0.0;
  TaskSequence seq;
  double earned = 0.0;
  for (std::size_t n = 0; n < rewards.size(); ++n) {
    seq.push_back(Task{rewards[n], 1});
    earned += played[n].empty() ? 0.0 : f_max(rewards[n], played[n]);
  }
  const double best = best_m_subset(seq, m).value;
  const double horizon = static_cast<double>(rewards.size());
  return (1.0 - 1.0 / horizon) * best - earned;
}

// ---------------------------------------------------------------------------

BogLearner::BogLearner(const BogConfig& config) : config_(config) {
  if (config_.num_arms < 1 || config_.subset_size < 1 || config_.num_segments < 1 || config_.segment_length < 1) {
    throw std::invalid_argument("BogLearner: K, M, N' and tau' must be >= 1");
  }
  const int count = m_tilde(config_.subset_size, config_.num_segments);
  experts_.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    if (config_.schedule == GammaSchedule::KnownHorizon && config_.num_arms > 1) {
      const double eta = std::sqrt(std::log(static_cast<double>(config_.num_arms)) / config_.num_segments);
      experts_.emplace_back(config_.num_arms, eta);
    } else {
      experts_.emplace_back(config_.num_arms);
    }
  }
}

double BogLearner::gamma(int n) const {
  switch (config_.schedule) {
    case GammaSchedule::KnownHorizon: return gamma_known(num_experts(), config_.num_arms, config_.num_segments);
    case GammaSchedule::Anytime: return gamma_anytime(num_experts(), config_.num_arms, n);
    case GammaSchedule::Fixed: return std::clamp(config_.fixed_gamma, 0.0, 1.0);
  }
  return 1.0;
}

SegmentResult BogLearner::run_segment(std::span<const TaskPiece> pieces, Rng& rng) {
  ++segment_;
  SegmentResult out;
  const std::vector<Arm> choices = collect_choices(experts_, rng);
  const bool explore = rng.bernoulli(gamma(segment_));
  if (explore) {
    out.mode = Mode::Explore;
    out.expert = rng.uniform_int(num_experts());
    out.probe = rng.uniform_int(config_.num_arms);
    std::vector<Arm> arms(choices.begin(), choices.begin() + out.expert);
    arms.push_back(out.probe);
    out.played = Subset(std::move(arms));
  } else {
    out.played = Subset(choices);
  }

  int length = 0;
  for (const TaskPiece& p : pieces) length += p.length;
  BasePolicy policy(config_.base, out.played, length);
  BaseRun run;
  run.actions.reserve(static_cast<std::size_t>(length));
  run.realized.reserve(static_cast<std::size_t>(length));
  for (const TaskPiece& p : pieces) {
    const double before = run.cumulative_mean;
    run_base(policy, std::span<const TaskPiece>(&p, 1), config_.noise, rng, run);
    out.piece_means.push_back(run.cumulative_mean - before);
  }
  out.realized = run.cumulative_realized;

  if (explore) {
    // Average realized reward can leave [0, 1] under noise; experts need [0, 1].
    out.payoff = std::clamp(run.cumulative_realized / std::max(1, length), 0.0, 1.0);
    experts_[static_cast<std::size_t>(out.expert)].update_single(out.probe, out.payoff);
    feed_zero(experts_, static_cast<std::size_t>(out.expert));
  } else {
    feed_zero(experts_, experts_.size());
  }
  last_played_ = out.played;
  return out;
}

TaskPlay BogLearner::play_task(const Task& task, Rng& rng) {
  const TaskPiece piece{&task.rewards, task.length};
  SegmentResult r = run_segment(std::span<const TaskPiece>(&piece, 1), rng);
  return {r.piece_means.front(), r.mode};
}

// ---------------------------------------------------------------------------

CostTriple schedule_costs(int k, int m, double tau, double c_b) {
  const double miss = tau;
  const double info = std::min(regret_bound(tau, k, c_b), miss);
  const double hit = std::min(regret_bound(tau, m, c_b), info);
  return CostTriple::constant(info, hit, miss, m);
}

void CoverKnowledge::record(const Subset& optimal) {
  observed_.push_back(optimal);
  discovered_ = discovered_.united(optimal);
  cover_ = greedy_cover(observed_);
}

double minimax_exploration(const ValueTable& table, int n, std::size_t discovered) {
  const int s = static_cast<int>(std::min<std::size_t>(discovered, static_cast<std::size_t>(table.num_optimal())));
  if (n >= table.horizon()) return kMinProbability;
  return clamp_probability(table.saddle(n, s).p);
}

GbassLearner::GbassLearner(const GbassConfig& config) : config_(config) {
  if (config_.schedule == GbassSchedule::MinimaxDP) {
    table_ = solve_cost_to_go(config_.num_tasks, config_.subset_size,
                              schedule_costs(config_.num_arms, config_.subset_size, config_.task_length, config_.c_b));
  }
}

double GbassLearner::schedule(int n) const {
  // Cover size rather than discovered arms: the two agree when every
  // identification is a singleton, and a multi-arm survivor set only grows
  // the cover by one arm instead of jumping straight to M.
  if (table_) return minimax_exploration(*table_, n, knowledge_.cover().size());
  const double b = regret_bound(config_.task_length, config_.num_arms, config_.c_b);
  return gbass_general_schedule(std::max<std::size_t>(1, knowledge_.cover().size()), config_.num_arms,
                                config_.task_length, config_.num_tasks, b);
}

namespace {

// Explore step shared by the identification-based learners: identify, then
// play the base policy on the survivors for the rest of the task.
double identify_and_play(const Task& task, double delta_task, BaseKind base, NoiseModel noise, Rng& rng,
                         Subset& surviving) {
  BaiOutcome bai = phased_elimination(task.rewards, task.length, delta_task, noise, rng);
  surviving = bai.surviving;
  double total = bai.cumulative_mean;
  const int rest = task.length - bai.rounds_used;
  if (rest > 0) total += run_base(base, surviving, Task{task.rewards, rest}, noise, rng).cumulative_mean;
  return total;
}

}  // namespace

TaskPlay GbassLearner::play_task(const Task& task, int n, Rng& rng) {
  const bool coin = rng.bernoulli(schedule(n));
  if (coin || n == 0 || knowledge_.cover().empty()) {
    Subset surviving;
    const double total = identify_and_play(task, config_.delta_task, config_.base, config_.noise, rng, surviving);
    knowledge_.record(surviving);
    return {total, Mode::Explore};
  }
  return {run_base(config_.base, knowledge_.cover(), task, config_.noise, rng).cumulative_mean, Mode::Exploit};
}

// ---------------------------------------------------------------------------

HypothesisSet::HypothesisSet(int k, int m) {
  if (choose(k, m) > 1'000'000) {
    throw ResourceLimitError("HypothesisSet: C(" + std::to_string(k) + "," + std::to_string(m) +
                             ") exceeds 1e6 hypotheses");
  }
  masks_ = enumerate_m_subsets(k, m);
  alive_.assign(masks_.size(), 1);
  alive_count_ = masks_.size();
}

bool HypothesisSet::commit(std::size_t survivors) {
  if (survivors == 0) {
    std::fill(alive_.begin(), alive_.end(), 1);
    alive_count_ = masks_.size();
    return false;
  }
  alive_.swap(scratch_);
  alive_count_ = survivors;
  return true;
}

bool HypothesisSet::filter(const Subset& optimal) {
  const std::uint64_t obs = optimal.mask();
  scratch_.resize(masks_.size());
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    scratch_[i] = alive_[i] && (masks_[i] & obs) != 0;
    survivors += scratch_[i];
  }
  return commit(survivors);
}

bool HypothesisSet::filter_parallel(const Subset& optimal, int threads) {
  const std::uint64_t obs = optimal.mask();
  scratch_.resize(masks_.size());
  const auto size = static_cast<long>(masks_.size());
  if (threads <= 0) threads = omp_get_max_threads();
  long survivors = 0;
#pragma omp parallel for schedule(static) reduction(+ : survivors) num_threads(threads)
  for (long i = 0; i < size; ++i) {
    const auto u = static_cast<std::size_t>(i);
    scratch_[u] = alive_[u] && (masks_[u] & obs) != 0;
    survivors += scratch_[u];
  }
  return commit(static_cast<std::size_t>(survivors));
}

Subset HypothesisSet::sample(Rng& rng) const {
  auto target = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(alive_count_)));
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if (!alive_[i]) continue;
    if (target == 0) return Subset::from_mask(masks_[i]);
    --target;
  }
  throw std::logic_error("HypothesisSet::sample: alive count out of sync");
}

std::vector<Subset> HypothesisSet::alive_subsets() const {
  std::vector<Subset> out;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if (alive_[i]) out.push_back(Subset::from_mask(masks_[i]));
  }
  return out;
}

EbassLearner::EbassLearner(const EbassConfig& config)
    : config_(config), hypotheses_(config.num_arms, config.subset_size),
      p_(ebass_schedule(config.task_length, config.num_arms, config.num_tasks)) {}

TaskPlay EbassLearner::play_task(const Task& task, int n, Rng& rng) {
  const bool coin = rng.bernoulli(p_);
  if (coin || n == 0) {
    Subset surviving;
    const double total = identify_and_play(task, config_.delta_task, config_.base, config_.noise, rng, surviving);
    discovered_ = discovered_.united(surviving);
    if (hypotheses_.filter(surviving)) {
      observed_.push_back(surviving);
    } else {
      ++fallbacks_;
      observed_.clear();
    }
    return {total, Mode::Explore};
  }
  const Subset chosen = hypotheses_.sample(rng);
  return {run_base(config_.base, chosen, task, config_.noise, rng).cumulative_mean, Mode::Exploit};
}

// ---------------------------------------------------------------------------

EwaPmTuning ewa_pm_tuning(EwaPmMode mode, double c_info, double c_miss, int n, double z) {
  if (!(c_info > 0.0) || !(c_miss > 0.0) || n < 1 || z < 1.0) {
    throw std::invalid_argument("ewa_pm_tuning: costs must be positive, N >= 1, Z >= 1");
  }
  const double log_z = std::log(z);
  if (mode == EwaPmMode::Agnostic) {
    const double p = std::cbrt(c_miss * c_miss * log_z / (c_info * c_info * n));
    const double eta = std::cbrt(log_z * log_z / (c_info * c_miss * c_miss * static_cast<double>(n) * n));
    return {clamp_probability(p), std::max(eta, 1e-12)};
  }
  return {clamp_probability(std::sqrt(c_miss * log_z / (c_info * n))), 1.0};
}

EwaPmState::EwaPmState(int k, int m, double c_info, double c_hit, double c_miss, double p, double eta)
    : c_info_(c_info), c_hit_(c_hit), c_miss_(c_miss), p_(p), eta_(eta) {
  if (choose(k, m) > 1'000'000) {
    throw ResourceLimitError("EwaPmState: C(" + std::to_string(k) + "," + std::to_string(m) + ") exceeds 1e6");
  }
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("EwaPmState: p must be in (0,1]");
  masks_ = enumerate_m_subsets(k, m);
  estimated_.assign(masks_.size(), 0.0);
  q_.assign(masks_.size(), 1.0 / static_cast<double>(masks_.size()));
}

double EwaPmState::cost(std::size_t i, const Subset& optimal) const {
  return (masks_[i] & optimal.mask()) != 0 ? c_hit_ : c_miss_;
}

void EwaPmState::refresh_weights() {
  const double lo = *std::min_element(estimated_.begin(), estimated_.end());
  double total = 0.0;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    q_[i] = std::exp(-eta_ * (estimated_[i] - lo));
    total += q_[i];
  }
  for (double& x : q_) x /= total;
}

void EwaPmState::observe(const Subset& optimal) {
  const std::uint64_t obs = optimal.mask();
  const double miss_estimate = (c_miss_ - c_hit_) / p_;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if ((masks_[i] & obs) == 0) estimated_[i] += miss_estimate;
  }
  refresh_weights();
}

void EwaPmState::observe_parallel(const Subset& optimal, int threads) {
  const std::uint64_t obs = optimal.mask();
  const double miss_estimate = (c_miss_ - c_hit_) / p_;
  const auto size = static_cast<long>(masks_.size());
  if (threads <= 0) threads = omp_get_max_threads();
  double lo = estimated_.empty() ? 0.0 : estimated_[0];
#pragma omp parallel num_threads(threads)
  {
#pragma omp for schedule(static) reduction(min : lo)
    for (long i = 0; i < size; ++i) {
      const auto u = static_cast<std::size_t>(i);
      if ((masks_[u] & obs) == 0) estimated_[u] += miss_estimate;
      lo = std::min(lo, estimated_[u]);
    }
#pragma omp for schedule(static)
    for (long i = 0; i < size; ++i) {
      const auto u = static_cast<std::size_t>(i);
      q_[u] = std::exp(-eta_ * (estimated_[u] - lo));
    }
  }
  // Serial normalization keeps the summation order of the reference path.
  double total = 0.0;
  for (double x : q_) total += x;
  for (double& x : q_) x /= total;
}

std::vector<double> EwaPmState::weights() const { return q_; }

std::size_t EwaPmState::sample(Rng& rng) const {
  double u = rng.uniform();
  for (std::size_t i = 0; i < q_.size(); ++i) {
    u -= q_[i];
    if (u < 0.0) return i;
  }
  // Rounding left a sliver: fall back to the last subset with positive mass.
  for (std::size_t i = q_.size(); i-- > 0;) {
    if (q_[i] > 0.0) return i;
  }
  return q_.size() - 1;
}

EwaPmStep ewa_pm_round(EwaPmState& state, const Subset& hidden_optimal, Rng& rng) {
  if (state.draw_explore(rng)) {
    state.observe(hidden_optimal);
    return {Mode::Explore, 0, state.c_info()};
  }
  const std::size_t i = state.sample(rng);
  return {Mode::Exploit, i, state.cost(i, hidden_optimal)};
}

namespace {

EwaPmState make_ewa_state(const EwaPmConfig& c) {
  const CostTriple costs = schedule_costs(c.num_arms, c.subset_size, c.task_length, c.c_b);
  const double z = static_cast<double>(choose(c.num_arms, c.subset_size));
  const EwaPmTuning t = ewa_pm_tuning(c.mode, costs.info(), costs.miss(), c.num_tasks, z);
  return EwaPmState(c.num_arms, c.subset_size, costs.info(), costs.hit(c.subset_size), costs.miss(), t.p, t.eta);
}

}  // namespace

EwaPmLearner::EwaPmLearner(const EwaPmConfig& config) : config_(config), state_(make_ewa_state(config)) {}

TaskPlay EwaPmLearner::play_task(const Task& task, int n, Rng& rng) {
  const bool coin = state_.draw_explore(rng);
  if (coin || n == 0) {
    Subset surviving;
    const double total = identify_and_play(task, config_.delta_task, config_.base, config_.noise, rng, surviving);
    discovered_ = discovered_.united(surviving);
    state_.observe(surviving);
    return {total, Mode::Explore};
  }
  const Subset chosen = Subset::from_mask(state_.mask(state_.sample(rng)));
  return {run_base(config_.base, chosen, task, config_.noise, rng).cumulative_mean, Mode::Exploit};
}

}  // namespace bss
