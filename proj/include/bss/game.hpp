#pragma once

// Minimax cost-to-go of the explore/exploit game between a subset-selecting
// learner and an adversary that reveals new optimal arms.
//
// State s counts discovered optimal arms (0..M). Each round the learner
// explores with probability p at cost C_info; otherwise it pays C_hit(s) if
// the adversary reuses a known arm and C_miss if it reveals a new one (which
// happens with probability q). The recursion solved backwards from n = N is
//
//   V_N(s) = 0,    V_n(M) = (N - n) C_hit(M),
//   V_n(s) = V_{n+1}(s) + C_hit + (C_info - C_hit)(C_miss - C_hit) / (C_miss - C_hit + G_{n+1}(s)),
//
// with G_n(s) = V_n(s) - V_n(s+1). The saddle point is
//   p = (C_miss - C_hit) / (C_miss - C_hit + G_{n+1}(s)),
//   q = (C_info - C_hit) / (C_miss - C_hit + G_{n+1}(s)).

#include <string>
#include <vector>

namespace bss {

/// (C_info, C_hit(s), C_miss). C_hit is tabulated for s = 0..M.
class CostTriple {
 public:
  /// Throws std::invalid_argument naming the first violated inequality of
  /// C_hit(s) <= C_info <= C_miss.
  CostTriple(double info, std::vector<double> hit_by_state, double miss);

  static CostTriple constant(double info, double hit, double miss, int m);

  double info() const { return info_; }
  double miss() const { return miss_; }
  double hit(int s) const { return hit_[static_cast<std::size_t>(s)]; }
  int max_state() const { return static_cast<int>(hit_.size()) - 1; }
  bool hit_is_constant() const;

 private:
  double info_;
  std::vector<double> hit_;
  double miss_;
};

struct SaddlePoint {
  double p = 0.0;  // learner's exploration probability
  double q = 0.0;  // adversary's new-arm probability
};

class ValueTable {
 public:
  int horizon() const { return n_; }
  int num_optimal() const { return m_; }
  const CostTriple& costs() const { return costs_; }

  double value(int n, int s) const { return v_[idx(n, s)]; }
  /// V_n(s) - V_n(s+1); requires s < M.
  double gap(int n, int s) const { return value(n, s) - value(n, s + 1); }
  /// Saddle point for round n (0-based, n < N) at state s. (0, 0) when s >= M.
  SaddlePoint saddle(int n, int s) const;

  friend ValueTable solve_cost_to_go(int horizon, int num_optimal, const CostTriple& costs);

 private:
  ValueTable(int n, int m, CostTriple costs)
      : n_(n), m_(m), costs_(std::move(costs)),
        v_(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(m + 1), 0.0) {}
  std::size_t idx(int n, int s) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(s);
  }

  int n_;
  int m_;
  CostTriple costs_;
  std::vector<double> v_;
};

/// Backward induction over n = N-1 .. 0. costs.max_state() must equal M.
ValueTable solve_cost_to_go(int horizon, int num_optimal, const CostTriple& costs);

/// Saddle point at (n, s); see ValueTable::saddle.
SaddlePoint saddle_point(const ValueTable& table, int n, int s);

/// L(q, p) = C_hit + p (C_info - C_hit) + V_{n+1}(s) + q (1 - p)(C_miss - C_hit) - p q G_{n+1}(s)
double game_objective(double p, double q, const ValueTable& table, int n, int s);

/// Objective when the adversary may also reveal two arms at once (mass q2 on
/// s -> s+2). Used to confirm that single reveals dominate.
double game_objective_two_reveal(double p, double q1, double q2, const ValueTable& table, int n, int s);

struct GBoundReport {
  bool passed = true;
  /// max over (n, s) of G_n(s) / sqrt(2 a b (N - n)), 0 where the bound is 0.
  double max_ratio = 0.0;
  /// G_n(s) >= 0 everywhere and V_n(s) - V_n(s') non-decreasing in s' (the
  /// ordering that makes single-arm reveals the adversary's best response).
  bool gap_ordering = true;
  std::vector<std::string> violations;
};

/// Checks G_n(s) <= sqrt(2 (C_info - C_hit)(C_miss - C_hit)(N - n)) at every
/// (n, s). With state-dependent C_hit the largest product over states is used.
GBoundReport check_g_bound(const ValueTable& table, double rel_tol = 1e-9);

}  // namespace bss
