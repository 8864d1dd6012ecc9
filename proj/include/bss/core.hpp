#pragma once

// Shared value types: reward vectors, arm subsets, noise, task sequences and
// regret traces, plus the max-reward set function and its exact maximizer.
//
// Arms are 0-based inside the library. Everything that crosses a process
// boundary (CLI output, JSON dumps, Subset::to_string) uses 1-based indices.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bss/rng.hpp"

namespace bss {

using Arm = int;

/// Raised when an exhaustive computation would exceed its enumeration guard.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid or unsatisfiable run configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean reward per arm, every entry in [0, 1].
class RewardVector {
 public:
  explicit RewardVector(std::vector<double> values);
  RewardVector(std::initializer_list<double> values) : RewardVector(std::vector<double>(values)) {}

  int num_arms() const { return static_cast<int>(values_.size()); }
  double operator[](Arm a) const { return values_[static_cast<std::size_t>(a)]; }
  std::span<const double> values() const { return values_; }

  double max() const;
  /// Lowest-index arm attaining the maximum.
  Arm argmax() const;
  /// Every arm attaining the maximum exactly.
  std::vector<Arm> argmax_set() const;

 private:
  std::vector<double> values_;
};

/// Sorted, duplicate-free set of arms.
class Subset {
 public:
  Subset() = default;
  /// Sorts and deduplicates. Negative indices are rejected.
  explicit Subset(std::vector<Arm> arms);
  Subset(std::initializer_list<Arm> arms) : Subset(std::vector<Arm>(arms)) {}

  /// Same as the constructor, then enforces |arms| <= capacity.
  static Subset bounded(std::vector<Arm> arms, std::size_t capacity);
  /// Builds from 1-based indices as written in documentation and I/O.
  static Subset from_one_based(std::vector<Arm> arms);
  /// Bitmask form, bit a set for arm a. Requires every arm < 64.
  static Subset from_mask(std::uint64_t mask);

  std::span<const Arm> arms() const { return arms_; }
  std::size_t size() const { return arms_.size(); }
  bool empty() const { return arms_.empty(); }
  bool contains(Arm a) const;
  bool intersects(const Subset& other) const;
  bool is_subset_of(const Subset& other) const;
  /// Largest arm index, or -1 if empty.
  Arm max_arm() const { return arms_.empty() ? -1 : arms_.back(); }

  Subset with(Arm a) const;
  Subset united(const Subset& other) const;
  Subset intersected(const Subset& other) const;
  Subset minus(const Subset& other) const;
  std::uint64_t mask() const;

  std::vector<Arm> to_one_based() const;
  /// "{1,3}" in 1-based form.
  std::string to_string() const;

  auto operator<=>(const Subset&) const = default;

 private:
  std::vector<Arm> arms_;
};

enum class NoiseKind { None, Uniform, Bernoulli };

/// Additive reward noise. Uniform is zero-mean on [-1/2, 1/2]; Bernoulli
/// replaces the reward by a 0/1 draw with the same mean.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Uniform;

  /// Sub-Gaussian variance proxy of the realized reward around its mean.
  double variance_proxy() const;
};

NoiseKind parse_noise_kind(const std::string& name);
std::string to_string(NoiseKind kind);

struct Task {
  RewardVector rewards;
  int length = 1;
};

class TaskSequence {
 public:
  TaskSequence() = default;
  explicit TaskSequence(std::vector<Task> tasks);

  void push_back(Task task);

  std::size_t num_tasks() const { return tasks_.size(); }
  const Task& operator[](std::size_t n) const { return tasks_[n]; }
  std::span<const Task> tasks() const { return tasks_; }
  std::int64_t total_rounds() const { return total_rounds_; }
  int num_arms() const;

 private:
  std::vector<Task> tasks_;
  std::int64_t total_rounds_ = 0;
};

struct Checkpoint {
  int task = 0;  // 1-based index of the last task included
  double cumulative_regret = 0.0;
};

struct RegretTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> checkpoints;
};

/// max_{a in S} r(a).
double f_max(const RewardVector& r, const Subset& s);

/// Exhaustive check that S -> f_max(r, S) is monotone and has diminishing
/// returns over all nonempty subsets. Throws ResourceLimitError for K > 12.
bool check_submodular_monotone(const RewardVector& r);

struct BestSubset {
  Subset subset;
  double value = 0.0;
};

/// The M-subset maximizing sum_n tau_n * f_max(r_n, S), lexicographically
/// smallest on ties. Enumeration is guarded by K <= 25 and C(K, M) <= 2e7.
BestSubset best_m_subset(const TaskSequence& seq, int m);
/// Same result, enumeration split across OpenMP threads by leading arm.
BestSubset best_m_subset_parallel(const TaskSequence& seq, int m, int threads = 0);

/// One realized reward for arm a.
double sample_reward(const RewardVector& r, Arm a, NoiseModel noise, Rng& rng);

/// sum_n sum_t (f_max(r_n, comparator) - r_n(A_{n,t})) on mean rewards.
/// actions[n] must hold exactly tau_n arms.
double pseudo_regret(const TaskSequence& seq, std::span<const std::vector<Arm>> actions,
                     const Subset& comparator);

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t choose(int n, int k);

/// All M-subsets of [K] as bitmasks in lexicographic order of their arm lists.
std::vector<std::uint64_t> enumerate_m_subsets(int k, int m);

}  // namespace bss
