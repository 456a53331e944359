#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cadweno/network.hpp"
#include "cadweno/training.hpp"
#include "cadweno/weno_weights.hpp"

using namespace cadweno;

namespace {

std::vector<Stencil3> stencils(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Stencil3> out(n);
  for (auto& s : out) s = {u(rng), u(rng), u(rng)};
  return out;
}

template <class F>
void run_weights(benchmark::State& state, F&& f) {
  const auto data = stencils(1024);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(data[k++ & 1023]));
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

static void BM_WeightsJs(benchmark::State& state) {
  run_weights(state, [](const Stencil3& s) { return weights_js(s); });
}
BENCHMARK(BM_WeightsJs);

static void BM_WeightsZ(benchmark::State& state) {
  run_weights(state, [](const Stencil3& s) { return weights_z(s); });
}
BENCHMARK(BM_WeightsZ);

static void BM_ModifiedDelta(benchmark::State& state) {
  run_weights(state, [](const Stencil3& s) { return modified_delta_layer(s); });
}
BENCHMARK(BM_ModifiedDelta);

static void BM_Weights5M(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 5>> data(1024);
  for (auto& d : data)
    for (double& v : d) v = u(rng);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(weights5_m(data[k++ & 1023]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Weights5M);

static void BM_NetworkForward(benchmark::State& state) {
  const NetworkParams p = initialize_params(3);
  run_weights(state, [&](const Stencil3& s) { return forward(p, s); });
}
BENCHMARK(BM_NetworkForward);

static void BM_BatchGradient(benchmark::State& state) {
  const Dataset ds = generate_dataset(1);
  const std::vector<Sample> batch(ds.samples.begin(), ds.samples.begin() + 200);
  const NetworkParams p = initialize_params(3);
  const Hyperparams h{.c = 7000, .d = 800};
  for (auto _ : state) benchmark::DoNotOptimize(gradient(p, batch, h));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BatchGradient)->Unit(benchmark::kMillisecond);
