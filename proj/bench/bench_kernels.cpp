// Serial vs. OpenMP kernels: exhaustive comparator search, E-BASS
// hypothesis filtering, EWA-PM weight updates and whole experiments.

#include <benchmark/benchmark.h>

#include "bss/core.hpp"
#include "bss/harness.hpp"
#include "bss/meta.hpp"

namespace {

bss::TaskSequence random_sequence(int k, int n) {
  bss::Rng rng(1);
  bss::TaskSequence seq;
  for (int i = 0; i < n; ++i) {
    std::vector<double> r(static_cast<std::size_t>(k));
    for (double& x : r) x = rng.uniform();
    seq.push_back(bss::Task{bss::RewardVector(r), 100});
  }
  return seq;
}

void BM_BestSubsetSerial(benchmark::State& state) {
  const auto seq = random_sequence(18, 200);
  for (auto _ : state) benchmark::DoNotOptimize(bss::best_m_subset(seq, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BestSubsetSerial)->Arg(3)->Arg(5);

void BM_BestSubsetParallel(benchmark::State& state) {
  const auto seq = random_sequence(18, 200);
  for (auto _ : state) benchmark::DoNotOptimize(bss::best_m_subset_parallel(seq, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BestSubsetParallel)->Arg(3)->Arg(5);

void BM_HypothesisFilter(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    state.PauseTiming();
    bss::HypothesisSet h(24, 5);
    state.ResumeTiming();
    benchmark::DoNotOptimize(parallel ? h.filter_parallel(bss::Subset{3, 17}) : h.filter(bss::Subset{3, 17}));
  }
}
BENCHMARK(BM_HypothesisFilter)->Arg(0)->Arg(1);

void BM_EwaObserve(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  bss::EwaPmState s(22, 5, 100, 40, 1000, 0.2, 1e-3);
  for (auto _ : state) {
    if (parallel) {
      s.observe_parallel(bss::Subset{4});
    } else {
      s.observe(bss::Subset{4});
    }
  }
}
BENCHMARK(BM_EwaObserve)->Arg(0)->Arg(1);

void BM_Experiment(benchmark::State& state) {
  bss::RunConfig cfg;
  cfg.env.num_arms = 10;
  cfg.env.subset_size = 3;
  cfg.env.num_tasks = 50;
  cfg.env.task_length = 500;
  cfg.env.delta = bss::EnvConfig::default_delta(50, 500);
  cfg.checkpoint_every = 50;
  for (auto kind : {bss::AlgoKind::MOSS, bss::AlgoKind::GBASS, bss::AlgoKind::EBASS, bss::AlgoKind::BOG}) {
    bss::AlgorithmSpec spec;
    spec.kind = kind;
    spec.label = bss::to_string(kind);
    cfg.algorithms.push_back(spec);
  }
  const bss::ExecOptions exec{state.range(0) ? bss::Execution::Parallel : bss::Execution::Serial, 0};
  for (auto _ : state) benchmark::DoNotOptimize(bss::run_experiment(cfg, exec));
}
BENCHMARK(BM_Experiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
