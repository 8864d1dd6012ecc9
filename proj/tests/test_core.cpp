#include <cmath>
#include <vector>

#include "doctest.h"

#include "bss/core.hpp"

using namespace bss;

TEST_CASE("reward vector and subset invariants") {
  CHECK_THROWS_AS(RewardVector(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(RewardVector({0.2, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(RewardVector({-0.1}), std::invalid_argument);

  const Subset s{3, 1, 3};
  CHECK(s.size() == 2);
  CHECK(s.to_string() == "{2,4}");
  CHECK(Subset::from_one_based({1, 3}) == Subset{0, 2});
  CHECK_THROWS(Subset::bounded({0, 1, 2}, 2));
  CHECK(Subset::from_mask(0b1010) == Subset{1, 3});
  CHECK(Subset{1, 3}.mask() == 0b1010);
}

TEST_CASE("f_max examples") {
  const RewardVector r{0.2, 0.9, 0.5};
  CHECK(f_max(r, Subset::from_one_based({1, 3})) == doctest::Approx(0.5));
  CHECK(f_max(r, Subset::from_one_based({1, 2, 3})) == doctest::Approx(0.9));
  CHECK(f_max(RewardVector{0.7, 0.7, 0.1}, Subset::from_one_based({1, 2})) == doctest::Approx(0.7));
}

TEST_CASE("submodularity check") {
  CHECK(check_submodular_monotone(RewardVector{0.3, 0.8}));
  CHECK(check_submodular_monotone(RewardVector{0.5, 0.5, 0.5}));
  CHECK_THROWS_AS(check_submodular_monotone(RewardVector(std::vector<double>(13, 0.5))), ResourceLimitError);
}

TaskSequence equal_tasks(std::vector<RewardVector> rs, int tau) {
  TaskSequence seq;
  for (auto& r : rs) seq.push_back(Task{r, tau});
  return seq;
}

TEST_CASE("best_m_subset examples") {
  const int tau = 7;
  auto a = best_m_subset(equal_tasks({RewardVector{0.9, 0.1, 0.2}, RewardVector{0.1, 0.8, 0.3}}, tau), 1);
  CHECK(a.subset == Subset::from_one_based({1}));
  CHECK(a.value == doctest::Approx(1.0 * tau));

  auto b = best_m_subset(
      equal_tasks({RewardVector{1, 0, 0}, RewardVector{0, 1, 0}, RewardVector{0, 0, 1}}, tau), 2);
  CHECK(b.subset == Subset::from_one_based({1, 2}));
  CHECK(b.value == doctest::Approx(2.0 * tau));

  auto c = best_m_subset(equal_tasks({RewardVector{0.3, 0.6, 0.1}}, tau), 3);
  CHECK(c.subset == Subset{0, 1, 2});
  CHECK(c.value == doctest::Approx(0.6 * tau));
}

TEST_CASE("best_m_subset serial and parallel agree") {
  Rng rng(11);
  TaskSequence seq;
  for (int n = 0; n < 40; ++n) {
    std::vector<double> r(12);
    for (double& x : r) x = std::round(rng.uniform() * 5.0) / 5.0;  // many ties
    seq.push_back(Task{RewardVector(r), 1 + rng.uniform_int(5)});
  }
  for (int m : {1, 3, 5}) {
    const auto s = best_m_subset(seq, m);
    const auto p = best_m_subset_parallel(seq, m, 3);
    CHECK(s.subset == p.subset);
    CHECK(s.value == p.value);
  }
}

TEST_CASE("sample_reward noise models") {
  Rng rng(3);
  const RewardVector r{0.4};
  CHECK(sample_reward(r, 0, NoiseModel{NoiseKind::None}, rng) == 0.4);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_reward(r, 0, NoiseModel{NoiseKind::Uniform}, rng);
    REQUIRE(x >= -0.1);
    REQUIRE(x <= 0.9);
    sum += x;
  }
  CHECK(std::abs(sum / draws - 0.4) <= 0.005);
  for (int i = 0; i < 100; ++i) CHECK(sample_reward(RewardVector{1.0}, 0, NoiseModel{NoiseKind::Bernoulli}, rng) == 1.0);
}

TEST_CASE("pseudo_regret examples") {
  {
    const TaskSequence seq = equal_tasks({RewardVector{1, 0}}, 2);
    const std::vector<std::vector<Arm>> actions{{1, 1}};
    CHECK(pseudo_regret(seq, actions, Subset{0}) == doctest::Approx(2.0));
  }
  {
    const TaskSequence seq = equal_tasks({RewardVector{0.5, 0.9}}, 3);
    const std::vector<std::vector<Arm>> actions{{0, 1, 0}};
    CHECK(pseudo_regret(seq, actions, Subset{1}) == doctest::Approx(0.8));
  }
  {
    const TaskSequence seq = equal_tasks({RewardVector{0.5, 0.9}}, 3);
    const std::vector<std::vector<Arm>> wrong_length{{0, 1}};
    CHECK_THROWS(pseudo_regret(seq, wrong_length, Subset{1}));
  }
}

TEST_CASE("choose and subset enumeration") {
  CHECK(choose(11, 2) == 55);
  CHECK(choose(5, 0) == 1);
  CHECK(choose(3, 4) == 0);
  const auto masks = enumerate_m_subsets(4, 2);
  REQUIRE(masks.size() == 6);
  CHECK(Subset::from_mask(masks.front()) == Subset{0, 1});
  CHECK(Subset::from_mask(masks[1]) == Subset{0, 2});
  CHECK(Subset::from_mask(masks.back()) == Subset{2, 3});
}
