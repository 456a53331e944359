#include <benchmark/benchmark.h>

#include <memory>

#include "cadweno/problems.hpp"
#include "cadweno/training.hpp"

using namespace cadweno;

namespace {

WeightingStrategy strategy(int which) {
  switch (which) {
    case 0: return WeightingStrategy::z3();
    case 1: return WeightingStrategy::cadnn(std::make_shared<const NetworkParams>(initialize_params(3)));
    case 2: return WeightingStrategy::js5();
    default: return WeightingStrategy::m5();
  }
}

void label(benchmark::State& state, const WeightingStrategy& w) { state.SetLabel(w.name()); }

}  // namespace

// One right-hand-side evaluation of the 2D Euler equations.
static void BM_Rhs2D(benchmark::State& state) {
  const WeightingStrategy w = strategy(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  const ProblemSpec p = with_resolution(find_problem("riemann-2d"), n, n);
  ConservedGrid grid = initial_grid(p, w.ghost_width());
  const SolverSetup setup = make_setup(p);
  std::vector<double> tendency;
  for (auto _ : state) {
    rhs(grid, setup, w, 0.0, tendency);
    benchmark::DoNotOptimize(tendency.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
  label(state, w);
}
BENCHMARK(BM_Rhs2D)->ArgsProduct({{0, 1, 2, 3}, {100}})->Unit(benchmark::kMillisecond);

// A complete Sod run at N = 200.
static void BM_SodRun(benchmark::State& state) {
  const WeightingStrategy w = strategy(static_cast<int>(state.range(0)));
  const ProblemSpec p = find_problem("sod");
  for (auto _ : state) benchmark::DoNotOptimize(advance(p, w).diagnostics.steps);
  label(state, w);
}
BENCHMARK(BM_SodRun)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
