#include "bss/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bss/base.hpp"
#include "bss/core.hpp"
#include "bss/envgen.hpp"
#include "bss/experts.hpp"
#include "bss/game.hpp"
#include "bss/harness.hpp"
#include "bss/meta.hpp"

namespace bss::verify {
namespace {

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

CheckResult result(const std::string& name, bool passed, std::string detail) {
  CheckResult r;
  r.name = name;
  r.passed = passed;
  r.detail = std::move(detail);
  return r;
}

// ---------------------------------------------------------------------------

CheckResult submodularity(bool quick) {
  const int count = quick ? 100 : 1000;
  Rng rng(derive_seed(0x5b, 1));
  int failures = 0;
  for (int i = 0; i < count; ++i) {
    const int k = 2 + rng.uniform_int(7);
    std::vector<double> r(static_cast<std::size_t>(k));
    // Every fourth vector is quantized so that ties show up.
    const bool coarse = i % 4 == 0;
    for (double& x : r) x = coarse ? std::round(rng.uniform() * 4.0) / 4.0 : rng.uniform();
    if (!check_submodular_monotone(RewardVector(r))) ++failures;
  }
  return result("submodularity", failures == 0, format("%d/%d reward vectors failed", failures, count));
}

// Smallest hitting set size by enumeration in order of popcount.
int brute_force_hitting_set(const std::vector<Subset>& sets, int k) {
  std::vector<std::uint64_t> masks;
  for (const Subset& s : sets) masks.push_back(s.mask());
  int best = k;
  for (std::uint64_t cand = 0; cand < (std::uint64_t{1} << k); ++cand) {
    const int size = std::popcount(cand);
    if (size >= best) continue;
    if (std::all_of(masks.begin(), masks.end(), [&](std::uint64_t m) { return (m & cand) != 0; })) best = size;
  }
  return best;
}

CheckResult greedy_quality(bool quick) {
  const int count = quick ? 100 : 500;
  Rng rng(derive_seed(0x5b, 2));
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const int k = 2 + rng.uniform_int(9);
    const int num_sets = 1 + rng.uniform_int(8);
    std::vector<Subset> sets;
    for (int j = 0; j < num_sets; ++j) {
      const int size = 1 + rng.uniform_int(std::min(k, 4));
      std::vector<Arm> arms;
      while (static_cast<int>(arms.size()) < size) {
        const Arm a = rng.uniform_int(k);
        if (std::find(arms.begin(), arms.end(), a) == arms.end()) arms.push_back(a);
      }
      sets.emplace_back(arms);
    }
    const Subset cover = greedy_cover(sets);
    const bool hits = std::all_of(sets.begin(), sets.end(), [&](const Subset& s) { return cover.intersects(s); });
    const int opt = brute_force_hitting_set(sets, k);
    const double bound = (1.0 + std::log(static_cast<double>(num_sets))) * opt;
    worst = std::max(worst, static_cast<double>(cover.size()) / opt);
    if (!hits || static_cast<double>(cover.size()) > bound + 1e-12) ++failures;
  }
  return result("greedy_cover_quality", failures == 0,
                format("%d/%d instances failed, worst |cover|/OPT %.3f", failures, count, worst));
}

struct RandomCosts {
  int horizon;
  int m;
  double info, hit, miss;
};

// The shared random-cost suite: C_hit < C_info < C_miss, N <= 500, M <= 20.
std::vector<RandomCosts> random_cost_suite(int count) {
  Rng rng(derive_seed(0x5b, 3));
  std::vector<RandomCosts> out;
  for (int i = 0; i < count; ++i) {
    RandomCosts c;
    c.horizon = 1 + rng.uniform_int(500);
    c.m = 1 + rng.uniform_int(20);
    c.miss = rng.uniform(1.0, 1000.0);
    c.info = c.miss * rng.uniform(0.05, 0.95);
    c.hit = c.info * rng.uniform(0.0, 0.95);
    out.push_back(c);
  }
  return out;
}

CheckResult dp_suite(bool quick) {
  const auto suite = random_cost_suite(quick ? 20 : 100);
  int failures = 0;
  double worst_saddle = 0.0;
  double worst_ratio = 0.0;
  std::string first;
  auto fail = [&](const std::string& why) {
    if (failures++ == 0) first = why;
  };
  for (const RandomCosts& c : suite) {
    const ValueTable table = solve_cost_to_go(c.horizon, c.m, CostTriple::constant(c.info, c.hit, c.miss, c.m));
    const GBoundReport report = check_g_bound(table);
    worst_ratio = std::max(worst_ratio, report.max_ratio);
    if (!report.passed) fail("G bound: " + (report.violations.empty() ? "" : report.violations.front()));
    if (!report.gap_ordering) fail("gap ordering violated");

    double telescoped = 0.0;
    for (int s = 0; s < c.m; ++s) telescoped += table.gap(0, s);
    const double direct = table.value(0, 0) - table.value(0, c.m);
    if (std::abs(telescoped - direct) > 1e-9 * std::max(1.0, std::abs(direct))) fail("telescoping mismatch");
    const double a = c.info - c.hit;
    const double b = c.miss - c.hit;
    if (telescoped > c.m * std::sqrt(2.0 * a * b * c.horizon) * (1.0 + 1e-9)) fail("telescoped sum above M sqrt(2abN)");

    for (int n = 0; n < c.horizon; ++n) {
      for (int s = 0; s < c.m; ++s) {
        const SaddlePoint sp = saddle_point(table, n, s);
        double max_q = -INFINITY;
        double min_p = INFINITY;
        for (int g = 0; g <= 100; ++g) {
          const double x = g / 100.0;
          max_q = std::max(max_q, game_objective(sp.p, x, table, n, s));
          min_p = std::min(min_p, game_objective(x, sp.q, table, n, s));
        }
        const double slack = (max_q - min_p) / c.miss;
        worst_saddle = std::max(worst_saddle, slack);
        if (slack > 1e-9) fail(format("saddle slack %.3g at n=%d s=%d", slack, n, s));
      }
    }
  }
  std::string detail = format("%d failures over %zu configs, max G ratio %.4f, max saddle slack %.2e", failures,
                              suite.size(), worst_ratio, worst_saddle);
  if (!first.empty()) detail += "; first: " + first;
  return result("dp_bound_suite", failures == 0, detail);
}

CheckResult one_step(bool quick) {
  const auto suite = random_cost_suite(quick ? 20 : 100);
  double worst = 0.0;
  for (const RandomCosts& c : suite) {
    const ValueTable table = solve_cost_to_go(c.horizon, c.m, CostTriple::constant(c.info, c.hit, c.miss, c.m));
    for (int s = 0; s < c.m; ++s) {
      worst = std::max(worst, std::abs(table.value(c.horizon - 1, s) - c.info) / c.info);
    }
  }
  return result("dp_one_step_closed_form", worst <= 1e-12, format("max relative error %.2e", worst));
}

// Two leaders trade places in blocks of a seed-dependent length; the other
// actions pay noise below both. Designed so that any forecaster that locks
// onto one leader pays for it.
std::vector<std::vector<double>> switching_stream(int v, int k, Rng& rng) {
  const int block = 1 + rng.uniform_int(200);
  const Arm lead_a = rng.uniform_int(k);
  const Arm lead_b = (lead_a + 1 + rng.uniform_int(k - 1)) % k;
  std::vector<std::vector<double>> payoffs(static_cast<std::size_t>(v), std::vector<double>(static_cast<std::size_t>(k)));
  for (int t = 0; t < v; ++t) {
    auto& x = payoffs[static_cast<std::size_t>(t)];
    for (double& e : x) e = 0.5 * rng.uniform();
    const bool first = (t / block) % 2 == 0;
    x[static_cast<std::size_t>(lead_a)] = first ? 1.0 : 0.0;
    x[static_cast<std::size_t>(lead_b)] = first ? 0.0 : 1.0;
  }
  return payoffs;
}

CheckResult expert_contract(bool quick) {
  const int seeds = quick ? 20 : 100;
  const int v = 10000;
  const int k = 10;
  const double bound = 2.0 * std::sqrt(v * std::log(static_cast<double>(k))) + std::sqrt(static_cast<double>(v));
  int within = 0;
  double worst = 0.0;
  for (int seed = 1; seed <= seeds; ++seed) {
    Rng rng(derive_seed(0x5b, 5, static_cast<std::uint64_t>(seed)));
    const auto payoffs = switching_stream(v, k, rng);
    ExpertState state(k);
    std::vector<Arm> chosen;
    chosen.reserve(static_cast<std::size_t>(v));
    for (const auto& x : payoffs) {
      chosen.push_back(state.advise(rng));
      state.update(x);
    }
    const double regret = expert_regret(payoffs, chosen);
    worst = std::max(worst, regret);
    if (regret <= bound) ++within;
  }
  const bool passed = within >= static_cast<int>(std::ceil(0.95 * seeds));
  return result("expert_regret_contract", passed,
                format("%d/%d seeds within %.1f, worst regret %.1f", within, seeds, bound, worst));
}

CheckResult ogo_unbiased(bool quick) {
  const int rounds = quick ? 20000 : 100000;
  const int k = 5;
  const int mt = 3;
  const double gamma = 0.3;
  const RewardVector r{0.9, 0.2, 0.6, 0.4, 0.75};
  const SetFunction g = max_reward_function(r);

  // Fixed, non-uniform experts; each round plays on fresh copies.
  std::vector<ExpertState> base;
  for (int j = 0; j < mt; ++j) {
    ExpertState e(k, 0.5);
    for (int a = 0; a < k; ++a) e.update_single(a, static_cast<double>((a + j) % k) / k);
    base.push_back(e);
  }

  Rng rng(derive_seed(0x5b, 6));
  const std::size_t cells = static_cast<std::size_t>(mt * k);
  std::vector<double> sum(cells, 0.0), sum_sq(cells, 0.0);
  for (int t = 0; t < rounds; ++t) {
    std::vector<ExpertState> experts = base;
    const OgoRound round = ogo_round(experts, gamma, g, rng);
    std::vector<Arm> prefix;
    for (int j = 0; j < mt; ++j) {
      const auto before = base[static_cast<std::size_t>(j)].cumulative_payoffs();
      const auto after = experts[static_cast<std::size_t>(j)].cumulative_payoffs();
      for (int a = 0; a < k; ++a) {
        const double paid = after[static_cast<std::size_t>(a)] - before[static_cast<std::size_t>(a)];
        std::vector<Arm> with = prefix;
        with.push_back(a);
        const double expected = gamma / (mt * k) * g(Subset(with));
        const double x = paid - expected;
        const std::size_t c = static_cast<std::size_t>(j * k + a);
        sum[c] += x;
        sum_sq[c] += x * x;
      }
      prefix.push_back(round.choices[static_cast<std::size_t>(j)]);
    }
  }
  int outside = 0;
  double worst_z = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double mean = sum[c] / rounds;
    const double var = std::max(0.0, sum_sq[c] / rounds - mean * mean);
    const double se = std::sqrt(var / rounds);
    const double z = se > 0.0 ? std::abs(mean) / se : (mean == 0.0 ? 0.0 : INFINITY);
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++outside;
  }
  return result("ogo_importance_weighting", outside == 0,
                format("%d/%zu (expert, arm) cells beyond 3 SE, max |z| %.2f over %d rounds", outside, cells, worst_z,
                       rounds));
}

CheckResult pe_identification(bool quick) {
  const int seeds = quick ? 50 : 200;
  EnvConfig cfg;
  cfg.num_arms = 15;
  cfg.subset_size = 1;
  cfg.num_tasks = 200;
  cfg.task_length = 4500;
  cfg.delta = 0.05;
  cfg.gap = GapMode::MinGap;
  const double gap = min_gap(cfg);
  const double delta_task = cfg.delta / cfg.num_tasks;
  int exact = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    Rng rng(derive_seed(0x5b, 7, static_cast<std::uint64_t>(seed)));
    const Arm best = rng.uniform_int(cfg.num_arms);
    const RewardVector r = draw_rewards(cfg, best, gap, rng);
    const BaiOutcome out = phased_elimination(r, cfg.task_length, delta_task, cfg.noise, rng);
    if (out.surviving == Subset{best}) ++exact;
  }
  const bool passed = exact >= static_cast<int>(std::ceil(0.95 * seeds));
  return result("pe_identification", passed,
                format("exact optimal arm in %d/%d seeds (gap %.4f, delta_task %.2e)", exact, seeds, gap, delta_task));
}

RunConfig ordering_config(int k, int m, int n, int tau, AdversaryMode mode, GapMode gap,
                          std::initializer_list<AlgoKind> kinds) {
  RunConfig cfg;
  cfg.env.num_arms = k;
  cfg.env.subset_size = m;
  cfg.env.num_tasks = n;
  cfg.env.task_length = tau;
  cfg.env.mode = mode;
  cfg.env.gap = gap;
  cfg.env.delta = EnvConfig::default_delta(n, tau);
  cfg.checkpoint_every = n;
  for (AlgoKind kind : kinds) {
    AlgorithmSpec spec;
    spec.kind = kind;
    spec.label = to_string(kind);
    cfg.algorithms.push_back(spec);
  }
  return cfg;
}

double final_of(const ExperimentResult& res, std::size_t algo, std::size_t seed) {
  return res.runs[algo * res.resolved.seeds.size() + seed].trace.checkpoints.back().cumulative_regret;
}

std::string regrets(const ExperimentResult& res, std::size_t algo) {
  std::string out = res.resolved.algorithms[algo].label + "=[";
  for (std::size_t s = 0; s < res.resolved.seeds.size(); ++s) {
    out += (s ? " " : "") + format("%.0f", final_of(res, algo, s));
  }
  return out + "]";
}

CheckResult figure1_ordering(bool quick) {
  const int n = quick ? 50 : 200;
  const RunConfig gap_cfg = ordering_config(15, 5, n, 1000, AdversaryMode::Stochastic, GapMode::MinGap,
                                            {AlgoKind::OptMOSS, AlgoKind::GBASS, AlgoKind::MOSS});
  const ExperimentResult gap_res = run_experiment(gap_cfg);
  int gap_ok = 0;
  for (std::size_t s = 0; s < gap_cfg.seeds.size(); ++s) {
    const double opt = final_of(gap_res, 0, s), gbass = final_of(gap_res, 1, s), moss = final_of(gap_res, 2, s);
    if (opt <= gbass && gbass < moss) ++gap_ok;
  }

  const RunConfig nogap_cfg = ordering_config(15, 5, n, 200, AdversaryMode::Stochastic, GapMode::NoGap,
                                              {AlgoKind::BOG, AlgoKind::OGo, AlgoKind::MOSS});
  const ExperimentResult nogap_res = run_experiment(nogap_cfg);
  int bog_ogo = 0, bog_moss = 0;
  for (std::size_t s = 0; s < nogap_cfg.seeds.size(); ++s) {
    const double bog = final_of(nogap_res, 0, s);
    if (bog < final_of(nogap_res, 1, s)) ++bog_ogo;
    if (bog < final_of(nogap_res, 2, s)) ++bog_moss;
  }
  const bool passed = gap_ok >= 4 && bog_ogo >= 4 && bog_moss >= 4;
  std::ostringstream detail;
  detail << "mingap opt<=gbass<moss " << gap_ok << "/5 " << regrets(gap_res, 0) << " " << regrets(gap_res, 1) << " "
         << regrets(gap_res, 2) << "; nogap bog<ogo " << bog_ogo << "/5, bog<moss " << bog_moss << "/5 "
         << regrets(nogap_res, 0) << " " << regrets(nogap_res, 1) << " (gamma "
         << format("%.2f", *nogap_res.resolved.algorithms[1].gamma) << ") " << regrets(nogap_res, 2);
  return result("figure1_ordering", passed, detail.str());
}

CheckResult ebass_scaled(bool quick) {
  const int n = quick ? 50 : 200;
  const RunConfig cfg =
      ordering_config(11, 2, n, 1000, AdversaryMode::Oblivious, GapMode::MinGap, {AlgoKind::EBASS, AlgoKind::MOSS});
  const ExperimentResult res = run_experiment(cfg);
  int wins = 0;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    if (final_of(res, 0, s) < final_of(res, 1, s)) ++wins;
  }
  return result("ebass_scaled", wins >= 4,
                format("ebass<moss %d/5 ", wins) + regrets(res, 0) + " " + regrets(res, 1));
}

CheckResult determinism(bool quick) {
  // Every algorithm and every adversary, small enough to run four times.
  std::string first_mismatch;
  int compared = 0;
  for (AdversaryMode mode : {AdversaryMode::Stochastic, AdversaryMode::Oblivious, AdversaryMode::NonOblivious}) {
    RunConfig cfg = ordering_config(8, 2, quick ? 10 : 30, 150, mode, GapMode::MinGap,
                                    {AlgoKind::BOG, AlgoKind::OGo, AlgoKind::GBASS, AlgoKind::EBASS, AlgoKind::EWAPM,
                                     AlgoKind::MOSS, AlgoKind::OptMOSS});
    cfg.checkpoint_every = 1;
    std::vector<std::string> outputs;
    for (const ExecOptions exec : {ExecOptions{Execution::Serial, 1}, ExecOptions{Execution::Serial, 1},
                                   ExecOptions{Execution::Parallel, 4}, ExecOptions{Execution::Parallel, 4}}) {
      std::ostringstream csv;
      const ExperimentResult res = run_experiment(cfg, exec);
      write_traces_csv(res, csv);
      csv << run_metadata(res).dump();
      outputs.push_back(csv.str());
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) {
      ++compared;
      if (outputs[i] != outputs[0] && first_mismatch.empty()) {
        first_mismatch = to_string(mode) + format(" run %zu differs", i);
      }
    }
  }
  return result("determinism", first_mismatch.empty(),
                first_mismatch.empty() ? format("%d serial/4-thread output pairs byte-identical", compared)
                                       : first_mismatch);
}

}  // namespace

std::vector<Check> acceptance_checks() {
  return {
      {"submodularity", 10.0, submodularity},
      {"greedy_cover_quality", 10.0, greedy_quality},
      {"dp_bound_suite", 30.0, dp_suite},
      {"dp_one_step_closed_form", 0.0, one_step},
      {"expert_regret_contract", 20.0, expert_contract},
      {"ogo_importance_weighting", 0.0, ogo_unbiased},
      {"pe_identification", 60.0, pe_identification},
      {"figure1_ordering", 600.0, figure1_ordering},
      {"ebass_scaled", 300.0, ebass_scaled},
      {"determinism", 0.0, determinism},
  };
}

CheckResult run_check(const Check& check, bool quick) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = check.run(quick);
  } catch (const std::exception& e) {
    r = result(check.name, false, std::string("threw: ") + e.what());
  }
  r.name = check.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.time_limit = check.time_limit;
  if (check.time_limit > 0.0 && r.seconds > check.time_limit) {
    r.passed = false;
    r.detail += format("; exceeded time limit %.0f s", check.time_limit);
  }
  return r;
}

}  // namespace bss::verify
