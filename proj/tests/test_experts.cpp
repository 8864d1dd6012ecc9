#include <cmath>

#include "doctest.h"

#include "bss/experts.hpp"

using namespace bss;

TEST_CASE("fresh state is uniform") {
  ExpertState e(4);
  for (double p : e.probabilities()) CHECK(p == doctest::Approx(0.25));
  Rng rng(1);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(e.advise(rng))];
  for (int c : counts) CHECK(std::abs(c / 10000.0 - 0.25) <= 0.02);
}

TEST_CASE("weights follow exp(eta * payoff)") {
  ExpertState e(2, std::log(2.0));
  e.update(std::vector<double>{1.0, 0.0});
  const auto p = e.probabilities();
  CHECK(p[0] == doctest::Approx(2.0 / 3.0));
  Rng rng(2);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += e.advise(rng) == 0;
  CHECK(std::abs(first / 10000.0 - 2.0 / 3.0) <= 0.02);
}

TEST_CASE("single action and validation") {
  ExpertState e(1);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) CHECK(e.advise(rng) == 0);
  ExpertState f(3);
  CHECK_THROWS(f.update(std::vector<double>{0.1, 0.2}));
  CHECK_THROWS(f.update(std::vector<double>{0.1, 1.2, 0.0}));
  CHECK_THROWS(f.update_single(0, -0.1));
  CHECK_THROWS(ExpertState(0));
}

TEST_CASE("zero payoffs leave the distribution unchanged") {
  ExpertState e(3, 0.7);
  e.update(std::vector<double>{0.3, 0.9, 0.1});
  const auto before = e.probabilities();
  e.update(std::vector<double>{0.0, 0.0, 0.0});
  const auto after = e.probabilities();
  for (std::size_t i = 0; i < 3; ++i) CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-15));
}

TEST_CASE("repeated e_1 concentrates the anytime forecaster") {
  ExpertState e(5);
  for (int i = 0; i < 1000; ++i) e.update_single(0, 1.0);
  CHECK(e.probabilities()[0] >= 0.99);
  CHECK(e.rounds_seen() == 1000);
  CHECK(e.learning_rate() == doctest::Approx(std::sqrt(std::log(5.0) / 1000.0)));
}

TEST_CASE("fixed-eta updates are additive") {
  ExpertState a(2, 0.4), b(2, 0.4);
  a.update(std::vector<double>{0.2, 0.5});
  a.update(std::vector<double>{0.3, 0.1});
  b.update(std::vector<double>{0.5, 0.6});
  CHECK(a.probabilities()[0] == doctest::Approx(b.probabilities()[0]).epsilon(1e-14));
}

TEST_CASE("probabilities are positive, normalized and label-symmetric") {
  ExpertState a(3, 2.0), b(3, 2.0);
  a.update(std::vector<double>{1.0, 0.2, 0.6});
  b.update(std::vector<double>{0.6, 1.0, 0.2});  // labels rotated by one
  const auto pa = a.probabilities(), pb = b.probabilities();
  double total = 0.0;
  for (double p : pa) {
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(pa[0] == doctest::Approx(pb[1]));
  CHECK(pa[1] == doctest::Approx(pb[2]));
}

TEST_CASE("expert regret") {
  const std::vector<std::vector<double>> x{{1.0, 0.0}};
  CHECK(expert_regret(x, std::vector<Arm>{1}) == 1.0);
  const std::vector<std::vector<double>> y{{0.2, 0.9}, {0.4, 0.8}};
  CHECK(expert_regret(y, std::vector<Arm>{1, 1}) == 0.0);
}

TEST_CASE("alternating payoffs stay within the contract on average") {
  const int v = 10000, k = 10;
  double total = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    Rng rng(derive_seed(9, static_cast<std::uint64_t>(seed)));
    ExpertState e(k);
    std::vector<std::vector<double>> xs;
    std::vector<Arm> chosen;
    for (int t = 0; t < v; ++t) {
      std::vector<double> x(k, 0.0);
      x[static_cast<std::size_t>(t % 2)] = 1.0;
      chosen.push_back(e.advise(rng));
      e.update(x);
      xs.push_back(std::move(x));
    }
    total += expert_regret(xs, chosen);
  }
  CHECK(total / 50 <= 2.0 * std::sqrt(v * std::log(10.0)));
}
