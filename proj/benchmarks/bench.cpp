#include <benchmark/benchmark.h>

#include "longwave/simulate.hpp"
#include "longwave/transform.hpp"
#include "longwave/whittle.hpp"

namespace {

Eigen::MatrixXd sample_series(long N) {
  Eigen::VectorXd d(2);
  d << 0.2, 0.4;
  Eigen::MatrixXd Sigma(2, 2);
  Sigma << 1.0, 0.8, 0.8, 1.0;
  return longwave::sim_arfima0d0(N, d, Sigma, 42);
}

void BM_PyramidCfwC(benchmark::State& state) {
  const Eigen::MatrixXd X = sample_series(state.range(0));
  const auto bank = longwave::build_cfw_c(4, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(longwave::pyramid(X, bank, 10));
  }
}
BENCHMARK(BM_PyramidCfwC)->Arg(4096)->Arg(16384);

void BM_PyramidDaubechies(benchmark::State& state) {
  const Eigen::MatrixXd X = sample_series(state.range(0));
  const auto bank = longwave::build_daubechies(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(longwave::pyramid(X, bank, 10));
  }
}
BENCHMARK(BM_PyramidDaubechies)->Arg(4096)->Arg(16384);

void BM_Estimate(benchmark::State& state) {
  const Eigen::MatrixXd X = sample_series(state.range(0));
  longwave::WhittleConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(longwave::estimate(X, cfg));
  }
}
BENCHMARK(BM_Estimate)->Arg(4096);

void BM_NormalizationK(benchmark::State& state) {
  const auto bank = longwave::build_cfw_c(4, 4);
  double delta = 0.35;
  for (auto _ : state) {
    benchmark::DoNotOptimize(longwave::K(delta, bank));
    delta += 1e-9;  // defeat any external caching
  }
}
BENCHMARK(BM_NormalizationK);

}  // namespace

BENCHMARK_MAIN();
