#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bss/game.hpp"

using namespace bss;

TEST_CASE("cost triple validation names the broken inequality") {
  CHECK_THROWS_WITH_AS(CostTriple::constant(10, 20, 100, 2), doctest::Contains("C_hit"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(CostTriple::constant(200, 10, 100, 2), doctest::Contains("C_miss"), std::invalid_argument);
  CHECK_NOTHROW(CostTriple::constant(31.62, 10, 100, 3));
}

TEST_CASE("terminal row, full-knowledge column and one-step closed form") {
  const int n = 25, m = 4;
  const ValueTable t = solve_cost_to_go(n, m, CostTriple::constant(31.62, 10, 100, m));
  for (int s = 0; s <= m; ++s) CHECK(t.value(n, s) == 0.0);
  for (int i = 0; i <= n; ++i) CHECK(t.value(i, m) == doctest::Approx((n - i) * 10.0));
  for (int s = 0; s < m; ++s) CHECK(t.value(n - 1, s) == doctest::Approx(31.62).epsilon(1e-12));
}

TEST_CASE("recursion matches an independent evaluation") {
  // Oracle: the recursion written out directly for one state column.
  const double info = 40, hit = 12, miss = 150;
  const int n = 30, m = 3;
  const ValueTable t = solve_cost_to_go(n, m, CostTriple::constant(info, hit, miss, m));
  const double a = info - hit, b = miss - hit;
  std::vector<std::vector<double>> v(n + 1, std::vector<double>(m + 1, 0.0));
  for (int i = n - 1; i >= 0; --i) {
    v[i][m] = v[i + 1][m] + hit;
    for (int s = m - 1; s >= 0; --s) {
      const double g = v[i + 1][s] - v[i + 1][s + 1];
      v[i][s] = v[i + 1][s] + hit + a * b / (b + g);
    }
  }
  for (int i = 0; i <= n; ++i) {
    for (int s = 0; s <= m; ++s) CHECK(t.value(i, s) == doctest::Approx(v[i][s]).epsilon(1e-12));
  }
}

TEST_CASE("G bound example") {
  const ValueTable t = solve_cost_to_go(11, 2, CostTriple::constant(31.62, 10, 100, 2));
  const double bound = std::sqrt(2.0 * 21.62 * 90.0 * 10.0);
  CHECK(bound == doctest::Approx(197.3).epsilon(1e-3));
  CHECK(t.gap(0, 0) <= bound);
  for (int i = 0; i < 11; ++i) CHECK(t.gap(i, 0) >= t.gap(i + 1, 0));
  const GBoundReport report = check_g_bound(t);
  CHECK(report.passed);
  CHECK(report.gap_ordering);
  CHECK(report.max_ratio <= 1.0);
}

TEST_CASE("saddle point closed forms") {
  const ValueTable t = solve_cost_to_go(5, 2, CostTriple::constant(31.62, 10, 100, 2));
  const SaddlePoint last = saddle_point(t, 4, 0);
  CHECK(last.p == doctest::Approx(1.0));
  CHECK(last.q == doctest::Approx(0.2402).epsilon(1e-3));
  const SaddlePoint done = saddle_point(t, 0, 2);
  CHECK(done.p == 0.0);
  CHECK(done.q == 0.0);
  // Larger gaps earlier in the horizon mean less exploration.
  CHECK(saddle_point(t, 0, 0).p <= saddle_point(t, 3, 0).p);
}

TEST_CASE("game objective") {
  const ValueTable t = solve_cost_to_go(8, 3, CostTriple::constant(30, 10, 100, 3));
  CHECK(game_objective(0, 0, t, 2, 1) == doctest::Approx(10 + t.value(3, 1)));
  // p = 1: L = C_info + V_{n+1}(s) - q G_{n+1}(s).
  for (double q : {0.1, 0.5, 0.9}) {
    CHECK(game_objective(1, q, t, 2, 1) == doctest::Approx(30 + t.value(3, 1) - q * t.gap(3, 1)));
  }
  const SaddlePoint sp = saddle_point(t, 2, 1);
  double max_q = -1e300, min_p = 1e300;
  for (int g = 0; g <= 100; ++g) {
    max_q = std::max(max_q, game_objective(sp.p, g / 100.0, t, 2, 1));
    min_p = std::min(min_p, game_objective(g / 100.0, sp.q, t, 2, 1));
  }
  CHECK(max_q - min_p <= 1e-9 * 100);
}

TEST_CASE("two-arm reveals never beat single reveals") {
  const ValueTable t = solve_cost_to_go(40, 5, CostTriple::constant(25, 8, 120, 5));
  for (int n : {0, 10, 39}) {
    for (int s = 0; s + 2 <= 5; ++s) {
      const SaddlePoint sp = saddle_point(t, n, s);
      const double single = game_objective(sp.p, sp.q, t, n, s);
      for (int a = 0; a <= 10; ++a) {
        for (int b = 0; a + b <= 10; ++b) {
          CHECK(game_objective_two_reveal(sp.p, a / 10.0, b / 10.0, t, n, s) <= single + 1e-9 * 120);
        }
      }
    }
  }
}

TEST_CASE("state-dependent hit costs") {
  std::vector<double> hit{0, 10, 14.1, 17.3};
  const CostTriple c(31.62, hit, 100);
  const ValueTable t = solve_cost_to_go(20, 3, c);
  for (int i = 0; i <= 20; ++i) CHECK(t.value(i, 3) == doctest::Approx((20 - i) * 17.3));
  CHECK(check_g_bound(t).passed);
}
