#include <benchmark/benchmark.h>

#include <numbers>

#include "netlds/experiment.hpp"
#include "netlds/simulate.hpp"
#include "netlds/spectral.hpp"
#include "netlds/wiener.hpp"

namespace {

using namespace netlds;

LdsModel bench_model() {
  return model_from_rule(grid_graph(3, 3), WeightRule{});
}

void BM_Simulate(benchmark::State& state) {
  const auto model = bench_model();
  const Graph g = grid_graph(3, 3);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(model, g, Regime::consecutive, n, 16, 1));
  }
  state.SetItemsProcessed(state.iterations() * n * 16);
}
BENCHMARK(BM_Simulate)->Arg(256)->Arg(4096);

void BM_BuildDesign(benchmark::State& state) {
  const auto model = bench_model();
  const Graph g = grid_graph(3, 3);
  const int n = static_cast<int>(state.range(0));
  const auto batch = simulate(model, g, Regime::consecutive, n, 16, 1);
  const double f = 2.0 * std::numbers::pi / 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_design(batch, 0, f));
  }
}
BENCHMARK(BM_BuildDesign)->Arg(256)->Arg(4096);

void BM_RegularizedSolve(benchmark::State& state) {
  const auto model = bench_model();
  const Graph g = grid_graph(3, 3);
  const auto batch = simulate(model, g, Regime::consecutive, static_cast<int>(state.range(0)), 16, 1);
  const double f = 2.0 * std::numbers::pi / 16;
  const auto design = build_design(batch, 0, f);
  const double lambda = 0.5 * lambda_max(design);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_regularized_wiener(design, lambda));
  }
}
BENCHMARK(BM_RegularizedSolve)->Arg(1024)->Arg(8192);

void BM_ExpectedFinitePsd(benchmark::State& state) {
  const auto model = bench_model();
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_finite_psd(model, 2.0 * std::numbers::pi / N, N));
  }
}
BENCHMARK(BM_ExpectedFinitePsd)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
