#include <benchmark/benchmark.h>

#include <random>

#include "segsolve/equilibrium.hpp"
#include "segsolve/mcsim.hpp"
#include "segsolve/sweep.hpp"

using namespace segsolve;

static void BM_Solve(benchmark::State& state) {
  auto p = example_params();
  if (state.range(1)) p.cdf = SignalCdf::power(0.5);
  auto m = static_cast<Mechanism>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, m));
}
BENCHMARK(BM_Solve)->ArgsProduct({{0, 1, 2}, {0, 1}})->ArgNames({"mech", "sqrt_cdf"});

static void BM_SolvePolicy(benchmark::State& state) {
  auto p = example_params();
  auto m = state.range(0) ? Mechanism::DA_WL : Mechanism::DA_L;
  for (auto _ : state) benchmark::DoNotOptimize(solve_policy(p, m));
}
BENCHMARK(BM_SolvePolicy)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_KinkSweep(benchmark::State& state) {
  auto p = example_params();
  double step = 1.0 / double(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kink_sweep(p, step, 1));
  state.SetItemsProcessed(state.iterations() * enumerate_single_kink(step).size());
}
BENCHMARK(BM_KinkSweep)->Arg(10)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_FiniteSchoolStage(benchmark::State& state) {
  auto p = example_params();
  auto m = state.range(1) ? Mechanism::TTC : Mechanism::DA;
  auto cut = solve(p, m).cutoffs;
  std::mt19937_64 rng(1);
  auto agents = sample_agents(p, std::size_t(state.range(0)), rng);
  auto zone = housing_stage(agents, cut, p, HousingRule::Clearing, rng);
  for (auto _ : state) benchmark::DoNotOptimize(run_school_stage(agents, zone, p, m, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FiniteSchoolStage)
    ->ArgsProduct({{20000, 200000}, {0, 1}})
    ->ArgNames({"agents", "ttc"})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
