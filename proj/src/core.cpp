#include "bss/core.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace bss {

RewardVector::RewardVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("RewardVector: need at least one arm");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("RewardVector: entry " + std::to_string(v) + " outside [0,1]");
    }
  }
}

double RewardVector::max() const { return *std::max_element(values_.begin(), values_.end()); }

Arm RewardVector::argmax() const {
  return static_cast<Arm>(std::max_element(values_.begin(), values_.end()) - values_.begin());
}

std::vector<Arm> RewardVector::argmax_set() const {
  const double best = max();
  std::vector<Arm> out;
  for (Arm a = 0; a < num_arms(); ++a) {
    if (values_[static_cast<std::size_t>(a)] == best) out.push_back(a);
  }
  return out;
}

Subset::Subset(std::vector<Arm> arms) : arms_(std::move(arms)) {
  std::sort(arms_.begin(), arms_.end());
  arms_.erase(std::unique(arms_.begin(), arms_.end()), arms_.end());
  if (!arms_.empty() && arms_.front() < 0) throw std::invalid_argument("Subset: negative arm index");
}

Subset Subset::bounded(std::vector<Arm> arms, std::size_t capacity) {
  Subset s(std::move(arms));
  if (s.size() > capacity) {
    throw std::invalid_argument("Subset: " + std::to_string(s.size()) + " arms exceed capacity " +
                                std::to_string(capacity));
  }
  return s;
}

Subset Subset::from_one_based(std::vector<Arm> arms) {
  for (Arm& a : arms) {
    if (a < 1) throw std::invalid_argument("Subset: 1-based index must be >= 1");
    --a;
  }
  return Subset(std::move(arms));
}

Subset Subset::from_mask(std::uint64_t mask) {
  std::vector<Arm> arms;
  arms.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    arms.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  Subset s;
  s.arms_ = std::move(arms);
  return s;
}

bool Subset::contains(Arm a) const { return std::binary_search(arms_.begin(), arms_.end(), a); }

bool Subset::intersects(const Subset& other) const {
  auto i = arms_.begin();
  auto j = other.arms_.begin();
  while (i != arms_.end() && j != other.arms_.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

bool Subset::is_subset_of(const Subset& other) const {
  return std::includes(other.arms_.begin(), other.arms_.end(), arms_.begin(), arms_.end());
}

Subset Subset::with(Arm a) const {
  Subset s = *this;
  auto it = std::lower_bound(s.arms_.begin(), s.arms_.end(), a);
  if (it == s.arms_.end() || *it != a) s.arms_.insert(it, a);
  return s;
}

Subset Subset::united(const Subset& other) const {
  Subset s;
  std::set_union(arms_.begin(), arms_.end(), other.arms_.begin(), other.arms_.end(),
                 std::back_inserter(s.arms_));
  return s;
}

Subset Subset::intersected(const Subset& other) const {
  Subset s;
  std::set_intersection(arms_.begin(), arms_.end(), other.arms_.begin(), other.arms_.end(),
                        std::back_inserter(s.arms_));
  return s;
}

Subset Subset::minus(const Subset& other) const {
  Subset s;
  std::set_difference(arms_.begin(), arms_.end(), other.arms_.begin(), other.arms_.end(),
                      std::back_inserter(s.arms_));
  return s;
}

std::uint64_t Subset::mask() const {
  std::uint64_t m = 0;
  for (Arm a : arms_) {
    if (a >= 64) throw std::invalid_argument("Subset::mask: arm index >= 64");
    m |= std::uint64_t{1} << a;
  }
  return m;
}

std::vector<Arm> Subset::to_one_based() const {
  std::vector<Arm> out(arms_);
  for (Arm& a : out) ++a;
  return out;
}

std::string Subset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (i) os << ',';
    os << arms_[i] + 1;
  }
  os << '}';
  return os.str();
}

double NoiseModel::variance_proxy() const {
  switch (kind) {
    // Uniform(-1/2, 1/2) is strictly sub-Gaussian: proxy equals its variance.
    case NoiseKind::Uniform: return 1.0 / 12.0;
    case NoiseKind::Bernoulli: return 0.25;
    case NoiseKind::None: return 0.0;
  }
  return 0.25;
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::None;
  if (name == "uniform") return NoiseKind::Uniform;
  if (name == "bernoulli") return NoiseKind::Bernoulli;
  throw ConfigError("unknown noise model '" + name + "' (expected none|uniform|bernoulli)");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::None: return "none";
    case NoiseKind::Uniform: return "uniform";
    case NoiseKind::Bernoulli: return "bernoulli";
  }
  return "?";
}

TaskSequence::TaskSequence(std::vector<Task> tasks) {
  for (Task& t : tasks) push_back(std::move(t));
}

void TaskSequence::push_back(Task task) {
  if (task.length < 1) throw std::invalid_argument("TaskSequence: task length must be >= 1");
  if (!tasks_.empty() && task.rewards.num_arms() != num_arms()) {
    throw std::invalid_argument("TaskSequence: all tasks must have the same number of arms");
  }
  total_rounds_ += task.length;
  tasks_.push_back(std::move(task));
}

int TaskSequence::num_arms() const { return tasks_.empty() ? 0 : tasks_.front().rewards.num_arms(); }

namespace {

void check_arms(const RewardVector& r, const Subset& s) {
  if (s.empty()) throw std::invalid_argument("f_max: empty subset");
  if (s.max_arm() >= r.num_arms()) {
    throw std::invalid_argument("f_max: arm " + std::to_string(s.max_arm() + 1) + " outside [1.." +
                                std::to_string(r.num_arms()) + "]");
  }
}

constexpr int kMaxSubmodularArms = 12;
constexpr int kMaxEnumerationArms = 25;
constexpr std::uint64_t kMaxEnumeratedSubsets = 20'000'000;

// Column-major view of a sequence: weight[n] * rewards[n][a], so a subset's
// value is sum_n max_{a in S} weighted[a][n].
struct WeightedColumns {
  int num_arms = 0;
  std::size_t num_tasks = 0;
  std::vector<double> data;  // data[a * num_tasks + n]

  explicit WeightedColumns(const TaskSequence& seq)
      : num_arms(seq.num_arms()), num_tasks(seq.num_tasks()),
        data(static_cast<std::size_t>(num_arms) * num_tasks) {
    for (std::size_t n = 0; n < num_tasks; ++n) {
      const Task& t = seq[n];
      for (Arm a = 0; a < num_arms; ++a) {
        data[static_cast<std::size_t>(a) * num_tasks + n] = t.length * t.rewards[a];
      }
    }
  }
  const double* column(Arm a) const { return data.data() + static_cast<std::size_t>(a) * num_tasks; }
};

void guard_enumeration(int k, int m) {
  if (m < 1 || m > k) {
    throw std::invalid_argument("best_m_subset: need 1 <= M <= K, got M=" + std::to_string(m) +
                                " K=" + std::to_string(k));
  }
  if (k > kMaxEnumerationArms || choose(k, m) > kMaxEnumeratedSubsets) {
    throw ResourceLimitError("best_m_subset: C(" + std::to_string(k) + "," + std::to_string(m) +
                             ") exceeds the enumeration guard (K <= 25, C(K,M) <= 2e7)");
  }
}

// Depth-first lexicographic enumeration of the subsets extending `prefix`.
// running[n] holds the prefix value per task; the best strictly-greater value
// wins so the first (lexicographically smallest) maximizer is kept.
class Enumerator {
 public:
  Enumerator(const WeightedColumns& cols, int m)
      : cols_(cols), m_(m), stack_(static_cast<std::size_t>(m + 1), std::vector<double>(cols.num_tasks, 0.0)) {}

  void run_from(Arm first) {
    chosen_.assign(1, first);
    const double* col = cols_.column(first);
    std::copy(col, col + cols_.num_tasks, stack_[1].begin());
    descend(1, first + 1);
  }

  double best_value() const { return best_value_; }
  const std::vector<Arm>& best() const { return best_; }

 private:
  void descend(int depth, Arm next) {
    if (depth == m_) {
      double v = 0.0;
      for (double x : stack_[static_cast<std::size_t>(depth)]) v += x;
      if (v > best_value_) {
        best_value_ = v;
        best_ = chosen_;
      }
      return;
    }
    const int remaining = m_ - depth;
    for (Arm a = next; a <= cols_.num_arms - remaining; ++a) {
      const auto& prev = stack_[static_cast<std::size_t>(depth)];
      auto& cur = stack_[static_cast<std::size_t>(depth + 1)];
      const double* col = cols_.column(a);
      for (std::size_t n = 0; n < cols_.num_tasks; ++n) cur[n] = std::max(prev[n], col[n]);
      chosen_.push_back(a);
      descend(depth + 1, a + 1);
      chosen_.pop_back();
    }
  }

  const WeightedColumns& cols_;
  int m_;
  std::vector<std::vector<double>> stack_;
  std::vector<Arm> chosen_;
  std::vector<Arm> best_;
  double best_value_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

double f_max(const RewardVector& r, const Subset& s) {
  check_arms(r, s);
  double best = r[s.arms().front()];
  for (Arm a : s.arms()) best = std::max(best, r[a]);
  return best;
}

bool check_submodular_monotone(const RewardVector& r) {
  const int k = r.num_arms();
  if (k > kMaxSubmodularArms) {
    throw ResourceLimitError("check_submodular_monotone: K=" + std::to_string(k) + " exceeds 12");
  }
  const std::uint32_t full = (1u << k) - 1;
  std::vector<double> f(full + 1, 0.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int low = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    f[s] = rest == 0 ? r[low] : std::max(f[rest], r[low]);
  }
  // All pairs S1 ⊆ S2 with S1 nonempty: iterate S2, then its nonempty submasks.
  for (std::uint32_t s2 = 1; s2 <= full; ++s2) {
    for (std::uint32_t s1 = s2; s1 != 0; s1 = (s1 - 1) & s2) {
      if (f[s1] > f[s2]) return false;
      for (int a = 0; a < k; ++a) {
        const std::uint32_t bit = 1u << a;
        const double gain_big = f[s2 | bit] - f[s2];
        const double gain_small = f[s1 | bit] - f[s1];
        if (gain_big > gain_small) return false;
      }
    }
  }
  return true;
}

BestSubset best_m_subset(const TaskSequence& seq, int m) {
  const int k = seq.num_arms();
  guard_enumeration(k, m);
  const WeightedColumns cols(seq);
  Enumerator e(cols, m);
  for (Arm first = 0; first <= k - m; ++first) e.run_from(first);
  return {Subset(e.best()), e.best_value()};
}

BestSubset best_m_subset_parallel(const TaskSequence& seq, int m, int threads) {
  const int k = seq.num_arms();
  guard_enumeration(k, m);
  const WeightedColumns cols(seq);
  const int leads = k - m + 1;
  std::vector<double> values(static_cast<std::size_t>(leads));
  std::vector<std::vector<Arm>> winners(static_cast<std::size_t>(leads));
  if (threads <= 0) threads = omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int first = 0; first < leads; ++first) {
    Enumerator e(cols, m);
    e.run_from(first);
    values[static_cast<std::size_t>(first)] = e.best_value();
    winners[static_cast<std::size_t>(first)] = e.best();
  }

  // Leading arms are visited in lexicographic order, so a strict comparison
  // reproduces the serial tie-break.
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return {Subset(winners[best]), values[best]};
}

double sample_reward(const RewardVector& r, Arm a, NoiseModel noise, Rng& rng) {
  if (a < 0 || a >= r.num_arms()) throw std::invalid_argument("sample_reward: arm index out of range");
  const double mean = r[a];
  switch (noise.kind) {
    case NoiseKind::None: return mean;
    case NoiseKind::Uniform: return mean + rng.uniform(-0.5, 0.5);
    case NoiseKind::Bernoulli: return rng.uniform() < mean ? 1.0 : 0.0;
  }
  return mean;
}

double pseudo_regret(const TaskSequence& seq, std::span<const std::vector<Arm>> actions,
                     const Subset& comparator) {
  if (actions.size() != seq.num_tasks()) {
    throw std::invalid_argument("pseudo_regret: got actions for " + std::to_string(actions.size()) +
                                " tasks, sequence has " + std::to_string(seq.num_tasks()));
  }
  double total = 0.0;
  for (std::size_t n = 0; n < seq.num_tasks(); ++n) {
    const Task& t = seq[n];
    if (actions[n].size() != static_cast<std::size_t>(t.length)) {
      throw std::invalid_argument("pseudo_regret: task " + std::to_string(n + 1) + " has " +
                                  std::to_string(actions[n].size()) + " actions, expected " +
                                  std::to_string(t.length));
    }
    const double best = f_max(t.rewards, comparator);
    for (Arm a : actions[n]) {
      if (a < 0 || a >= t.rewards.num_arms()) throw std::invalid_argument("pseudo_regret: bad arm index");
      total += best - t.rewards[a];
    }
  }
  return total;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * x / i is exact; divide out the common factor first to delay overflow.
    std::uint64_t x = static_cast<std::uint64_t>(n - k + i);
    std::uint64_t d = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(c, d);
    c /= g;
    d /= g;
    x /= d;  // d divides x once gcd(c, d) = 1
    if (c > kMax / x) return kMax;
    c *= x;
  }
  return c;
}

std::vector<std::uint64_t> enumerate_m_subsets(int k, int m) {
  if (k > 64) throw std::invalid_argument("enumerate_m_subsets: K must be <= 64");
  if (m < 0 || m > k) throw std::invalid_argument("enumerate_m_subsets: need 0 <= M <= K");
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(choose(k, m)));
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (int a : idx) mask |= std::uint64_t{1} << a;
    out.push_back(mask);
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == k - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace bss
