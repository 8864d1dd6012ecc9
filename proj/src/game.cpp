#include "bss/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bss {

CostTriple::CostTriple(double info, std::vector<double> hit_by_state, double miss)
    : info_(info), hit_(std::move(hit_by_state)), miss_(miss) {
  if (hit_.empty()) throw std::invalid_argument("CostTriple: C_hit table is empty");
  if (!(info_ <= miss_)) {
    std::ostringstream os;
    os << "CostTriple: C_info <= C_miss violated (C_info=" << info_ << ", C_miss=" << miss_ << ")";
    throw std::invalid_argument(os.str());
  }
  for (std::size_t s = 0; s < hit_.size(); ++s) {
    if (!(hit_[s] <= info_)) {
      std::ostringstream os;
      os << "CostTriple: C_hit(" << s << ") <= C_info violated (C_hit=" << hit_[s] << ", C_info=" << info_
         << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

CostTriple CostTriple::constant(double info, double hit, double miss, int m) {
  return CostTriple(info, std::vector<double>(static_cast<std::size_t>(m + 1), hit), miss);
}

bool CostTriple::hit_is_constant() const {
  return std::all_of(hit_.begin(), hit_.end(), [&](double h) { return h == hit_.front(); });
}

SaddlePoint ValueTable::saddle(int n, int s) const {
  if (n < 0 || n >= n_) throw std::out_of_range("saddle: round outside [0, N)");
  if (s >= m_) return {};
  const double hit = costs_.hit(s);
  const double b = costs_.miss() - hit;
  const double a = costs_.info() - hit;
  // A negative gap only arises with state-dependent C_hit; treat it as 0.
  const double g = std::max(0.0, gap(n + 1, s));
  const double denom = b + g;
  if (denom <= 0.0) return {1.0, 0.0};  // C_miss == C_hit: nothing to lose by exploring
  return {b / denom, a / denom};
}

ValueTable solve_cost_to_go(int horizon, int num_optimal, const CostTriple& costs) {
  if (horizon < 1) throw std::invalid_argument("solve_cost_to_go: N must be >= 1");
  if (num_optimal < 1) throw std::invalid_argument("solve_cost_to_go: M must be >= 1");
  if (costs.max_state() != num_optimal) {
    throw std::invalid_argument("solve_cost_to_go: C_hit table must cover states 0..M");
  }
  ValueTable t(horizon, num_optimal, costs);
  const int m = num_optimal;
  for (int n = horizon - 1; n >= 0; --n) {
    t.v_[t.idx(n, m)] = t.v_[t.idx(n + 1, m)] + costs.hit(m);
    for (int s = 0; s < m; ++s) {
      const double hit = costs.hit(s);
      const double a = costs.info() - hit;
      const double b = costs.miss() - hit;
      const double g = std::max(0.0, t.v_[t.idx(n + 1, s)] - t.v_[t.idx(n + 1, s + 1)]);
      const double premium = (b + g) > 0.0 ? a * b / (b + g) : 0.0;
      t.v_[t.idx(n, s)] = t.v_[t.idx(n + 1, s)] + hit + premium;
    }
  }
  return t;
}

SaddlePoint saddle_point(const ValueTable& table, int n, int s) { return table.saddle(n, s); }

double game_objective(double p, double q, const ValueTable& table, int n, int s) {
  const CostTriple& c = table.costs();
  const double hit = c.hit(s);
  const double g = s < table.num_optimal() ? table.gap(n + 1, s) : 0.0;
  return hit + p * (c.info() - hit) + table.value(n + 1, s) + q * (1.0 - p) * (c.miss() - hit) - p * q * g;
}

double game_objective_two_reveal(double p, double q1, double q2, const ValueTable& table, int n, int s) {
  const CostTriple& c = table.costs();
  const double hit = c.hit(s);
  const double d1 = table.value(n + 1, s) - table.value(n + 1, s + 1);
  const double d2 = table.value(n + 1, s) - table.value(n + 1, s + 2);
  const double q = q1 + q2;
  return hit + p * (c.info() - hit) + table.value(n + 1, s) + q * (1.0 - p) * (c.miss() - hit) -
         p * (q1 * d1 + q2 * d2);
}

GBoundReport check_g_bound(const ValueTable& table, double rel_tol) {
  GBoundReport report;
  const CostTriple& c = table.costs();
  double ab = 0.0;
  for (int s = 0; s <= table.num_optimal(); ++s) {
    ab = std::max(ab, (c.info() - c.hit(s)) * (c.miss() - c.hit(s)));
  }
  const int big_n = table.horizon();
  for (int n = 0; n <= big_n; ++n) {
    const double bound = std::sqrt(2.0 * ab * (big_n - n));
    const double slack = rel_tol * std::max(1.0, c.miss());
    for (int s = 0; s < table.num_optimal(); ++s) {
      const double g = table.gap(n, s);
      if (bound > 0.0) report.max_ratio = std::max(report.max_ratio, g / bound);
      if (g > bound + slack) {
        report.passed = false;
        std::ostringstream os;
        os << "G_" << n << "(" << s << ")=" << g << " exceeds bound " << bound;
        report.violations.push_back(os.str());
      }
      if (g < -slack) {
        report.gap_ordering = false;
        std::ostringstream os;
        os << "G_" << n << "(" << s << ")=" << g << " is negative";
        report.violations.push_back(os.str());
      }
    }
  }
  return report;
}

}  // namespace bss
