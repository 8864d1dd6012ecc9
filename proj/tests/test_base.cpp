#include <cmath>
#include <numeric>

#include "doctest.h"

#include "bss/base.hpp"
#include "bss/envgen.hpp"

using namespace bss;

TEST_CASE("policies stay inside their restricted set") {
  const RewardVector r{0.1, 0.5, 0.9, 0.3, 0.7};
  const Subset allowed{1, 3, 4};
  for (BaseKind kind : {BaseKind::UCB, BaseKind::MOSS, BaseKind::EXP3}) {
    Rng rng(5);
    const BaseRun run = run_base(kind, allowed, Task{r, 500}, NoiseModel{}, rng);
    REQUIRE(run.actions.size() == 500);
    for (Arm a : run.actions) CHECK(allowed.contains(a));
    double mean = 0.0;
    for (Arm a : run.actions) mean += r[a];
    CHECK(run.cumulative_mean == doctest::Approx(mean));
  }
  BasePolicy p(BaseKind::MOSS, Subset{0, 2}, 10);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) p.update(p.select(rng), 0.5);
  CHECK(std::accumulate(p.pulls().begin(), p.pulls().end(), 0) == 10);
  CHECK_THROWS(p.update(1, 0.5));
}

TEST_CASE("single-arm subset plays that arm every round") {
  Rng rng(2);
  const BaseRun run = run_base(BaseKind::MOSS, Subset{2}, Task{RewardVector{0.1, 0.2, 0.6}, 40}, NoiseModel{}, rng);
  for (Arm a : run.actions) CHECK(a == 2);
  CHECK(run.cumulative_mean == doctest::Approx(40 * 0.6));
}

TEST_CASE("UCB has logarithmic regret on an easy pair") {
  const RewardVector r{0.9, 0.1};
  double total = 0.0;
  const int seeds = 50, tau = 10000;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(derive_seed(100, static_cast<std::uint64_t>(seed)));
    const BaseRun run = run_base(BaseKind::UCB, Subset{0, 1}, Task{r, tau}, NoiseModel{}, rng);
    total += (tau * 0.9 - run.cumulative_mean) / tau;
  }
  CHECK(total / seeds <= 0.02);
}

TEST_CASE("MOSS on the optimal subset beats MOSS on every arm") {
  EnvConfig cfg;
  cfg.num_arms = 30;
  cfg.subset_size = 10;
  cfg.num_tasks = 1;
  cfg.task_length = 4500;
  cfg.delta = EnvConfig::default_delta(1, 4500);
  int better = 0;
  const int seeds = 50;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(derive_seed(200, static_cast<std::uint64_t>(seed)));
    const Subset pool = sample_optimal_pool(cfg, rng);
    const Arm best = pool.arms()[static_cast<std::size_t>(rng.uniform_int(10))];
    const RewardVector r = draw_rewards(cfg, best, min_gap(cfg), rng);
    std::vector<Arm> all(30);
    std::iota(all.begin(), all.end(), 0);
    Rng a(derive_seed(300, static_cast<std::uint64_t>(seed)));
    Rng b = a;
    const double restricted = run_base(BaseKind::MOSS, pool, Task{r, 4500}, NoiseModel{}, a).cumulative_mean;
    const double full = run_base(BaseKind::MOSS, Subset(all), Task{r, 4500}, NoiseModel{}, b).cumulative_mean;
    if (restricted >= full) ++better;
  }
  CHECK(better >= 45);
}

TEST_CASE("phased elimination") {
  Rng rng(7);
  SUBCASE("single arm") {
    const BaiOutcome out = phased_elimination(RewardVector{0.3}, 10, 0.05, NoiseModel{}, rng);
    CHECK(out.surviving == Subset{0});
  }
  SUBCASE("easy pair") {
    int exact = 0;
    for (int seed = 0; seed < 200; ++seed) {
      Rng r(derive_seed(400, static_cast<std::uint64_t>(seed)));
      const BaiOutcome out = phased_elimination(RewardVector{0.9, 0.1}, 10000, 0.05, NoiseModel{}, r);
      if (out.surviving == Subset{0}) ++exact;
      CHECK(out.rounds_used <= 10000);
      CHECK(static_cast<int>(out.actions.size()) == out.rounds_used);
    }
    CHECK(exact >= 190);
  }
  SUBCASE("near ties and a short budget keep several arms") {
    int multiple = 0;
    for (int seed = 0; seed < 50; ++seed) {
      Rng r(derive_seed(500, static_cast<std::uint64_t>(seed)));
      const BaiOutcome out = phased_elimination(RewardVector{0.8, 0.79, 0.3, 0.78}, 200, 0.01, NoiseModel{}, r);
      CHECK(!out.surviving.empty());
      if (out.surviving.size() > 1) ++multiple;
    }
    CHECK(multiple >= 40);
  }
  SUBCASE("bad delta") { CHECK_THROWS(phased_elimination(RewardVector{0.3, 0.4}, 10, 1.0, NoiseModel{}, rng)); }
}

TEST_CASE("regret bound") {
  CHECK(regret_bound(100, 10, 1.0) == doctest::Approx(31.6228).epsilon(1e-5));
  CHECK(regret_bound(1, 1, 1.0) == 1.0);
  CHECK(regret_bound(500, 3, 1.0) <= regret_bound(500, 7, 1.0));
}
