#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "bss/envgen.hpp"

using namespace bss;

EnvConfig small_env(int k, int m, int n, int tau, AdversaryMode mode, GapMode gap = GapMode::MinGap) {
  EnvConfig cfg;
  cfg.num_arms = k;
  cfg.subset_size = m;
  cfg.num_tasks = n;
  cfg.task_length = tau;
  cfg.mode = mode;
  cfg.gap = gap;
  cfg.delta = EnvConfig::default_delta(n, tau);
  return cfg;
}

TEST_CASE("config validation") {
  EnvConfig cfg = small_env(5, 2, 10, 100, AdversaryMode::Stochastic);
  CHECK_NOTHROW(cfg.validate());
  cfg.subset_size = 6;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_env(5, 2, 10, 100, AdversaryMode::Stochastic);
  cfg.delta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(EnvConfig::default_delta(200, 1000) == doctest::Approx(1.0 / 200000));
  CHECK(parse_adversary_mode("nonoblivious") == AdversaryMode::NonOblivious);
  CHECK_THROWS_AS(parse_gap_mode("gap"), ConfigError);
}

TEST_CASE("optimal pool sampling") {
  EnvConfig full = small_env(3, 3, 1, 10, AdversaryMode::Stochastic);
  Rng rng(1);
  CHECK(sample_optimal_pool(full, rng) == Subset{0, 1, 2});

  EnvConfig cfg = small_env(30, 10, 1, 10, AdversaryMode::Stochastic);
  std::vector<int> counts(30, 0);
  for (int i = 0; i < 10000; ++i) {
    const Subset pool = sample_optimal_pool(cfg, rng);
    for (Arm a : pool.arms()) ++counts[static_cast<std::size_t>(a)];
  }
  for (int c : counts) CHECK(std::abs(c / 10000.0 - 1.0 / 3.0) <= 0.02);

  EnvConfig pair = small_env(2, 1, 1, 10, AdversaryMode::Stochastic);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += sample_optimal_pool(pair, rng) == Subset{0};
  CHECK(std::abs(first / 10000.0 - 0.5) <= 0.02);
}

TEST_CASE("min gap") {
  EnvConfig cfg = small_env(4, 1, 100, 1000, AdversaryMode::Stochastic);
  cfg.delta = 0.01;
  CHECK(min_gap(cfg) == doctest::Approx(std::sqrt(4 * std::log(1e4) / 1000)));
  CHECK(min_gap(cfg) == doctest::Approx(0.19194).epsilon(1e-4));
  cfg.num_arms = 1;
  cfg.subset_size = 1;
  CHECK(min_gap(cfg) == doctest::Approx(std::sqrt(std::log(1e4) / 1000)));
  cfg.task_length = 1;
  CHECK(min_gap(cfg) == 0.5);
  cfg.task_length = 1000000000;
  CHECK(min_gap(cfg) < 1e-3);
}

TEST_CASE("MinGap tasks respect the gap") {
  EnvConfig cfg = small_env(8, 3, 10000, 1000, AdversaryMode::Stochastic);
  const GeneratedSequence seq = gen_sequence(cfg, 5);
  const double gap = min_gap(cfg);
  for (std::size_t n = 0; n < seq.tasks.num_tasks(); ++n) {
    const RewardVector& r = seq.tasks[n].rewards;
    REQUIRE(seq.optimal[n].size() == 1);
    const Arm best = seq.optimal[n].arms()[0];
    CHECK(seq.pool.contains(best));
    double runner_up = 0.0;
    for (Arm a = 0; a < 8; ++a) {
      if (a != best) runner_up = std::max(runner_up, r[a]);
    }
    REQUIRE(r[best] - runner_up >= gap);
  }
}

TEST_CASE("NoGap tasks violate the gap with at least one arm") {
  EnvConfig cfg = small_env(8, 3, 2000, 200, AdversaryMode::Stochastic, GapMode::NoGap);
  const GeneratedSequence seq = gen_sequence(cfg, 6);
  const double gap = min_gap(cfg);
  for (std::size_t n = 0; n < seq.tasks.num_tasks(); ++n) {
    const RewardVector& r = seq.tasks[n].rewards;
    const Arm best = seq.optimal[n].arms()[0];
    CHECK(r.argmax() == best);
    double runner_up = 0.0;
    for (Arm a = 0; a < 8; ++a) {
      if (a != best) runner_up = std::max(runner_up, r[a]);
    }
    CHECK(r[best] - runner_up < gap);
  }
}

TEST_CASE("stochastic optimum frequencies") {
  EnvConfig cfg = small_env(20, 10, 10000, 100, AdversaryMode::Stochastic);
  cfg.gap = GapMode::NoGap;
  const GeneratedSequence seq = gen_sequence(cfg, 8);
  std::vector<int> counts(20, 0);
  for (const Subset& s : seq.optimal) ++counts[static_cast<std::size_t>(s.arms()[0])];
  for (Arm a : seq.pool.arms()) CHECK(std::abs(counts[static_cast<std::size_t>(a)] / 10000.0 - 0.1) <= 0.02);
}

TEST_CASE("singleton pool pins the optimum") {
  EnvConfig cfg = small_env(5, 1, 50, 100, AdversaryMode::Stochastic);
  const GeneratedSequence seq = gen_sequence(cfg, 2);
  for (std::size_t n = 0; n < 50; ++n) CHECK(seq.tasks[n].rewards.argmax() == seq.pool.arms()[0]);
}

TEST_CASE("oblivious sequences are reproducible and stay in the pool") {
  EnvConfig cfg = small_env(12, 4, 100, 500, AdversaryMode::Oblivious);
  const GeneratedSequence a = gen_sequence(cfg, 3), b = gen_sequence(cfg, 3);
  std::ostringstream ja, jb;
  write_sequence_jsonl(a, ja);
  write_sequence_jsonl(b, jb);
  CHECK(ja.str() == jb.str());
  for (const Subset& s : a.optimal) CHECK(s.is_subset_of(a.pool));
  CHECK(gen_sequence(small_env(12, 4, 1, 500, AdversaryMode::Oblivious), 3).tasks.num_tasks() == 1);
}

TEST_CASE("non-oblivious adversary reuses a fully known pool") {
  EnvConfig cfg = small_env(9, 3, 200, 300, AdversaryMode::NonOblivious);
  TaskStream probe(cfg, 4);
  const Subset pool = probe.optimal_pool();
  const GeneratedSequence seq = gen_sequence(cfg, 4, [&](int) { return pool; });
  for (const Subset& s : seq.optimal) CHECK(s.is_subset_of(pool));
  CHECK_THROWS_AS(gen_sequence(cfg, 4), std::invalid_argument);
  EnvConfig stoch = small_env(9, 3, 10, 300, AdversaryMode::Stochastic);
  CHECK_THROWS_AS(gen_sequence(stoch, 4, [&](int) { return pool; }), std::invalid_argument);
}

TEST_CASE("json lines dump") {
  EnvConfig cfg = small_env(3, 1, 2, 10, AdversaryMode::Stochastic);
  const GeneratedSequence seq = gen_sequence(cfg, 1);
  std::ostringstream out;
  write_sequence_jsonl(seq, out);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("n") == ++n);
    CHECK(j.at("tau") == 10);
    CHECK(j.at("r").size() == 3);
    CHECK(j.at("opt")[0].get<int>() == seq.optimal[static_cast<std::size_t>(n - 1)].arms()[0] + 1);
  }
  CHECK(n == 2);
}
