#include <benchmark/benchmark.h>

#include "mrjd/density.hpp"
#include "mrjd/simulate.hpp"

using namespace mrjd;

namespace {

ModelParams merton_params() {
  ModelParams p;
  p.alpha = 1.0;
  p.mu = 0.0;
  p.sigma = 0.3;
  p.lambda = 20.0;
  p.jumps = JumpSpec::gaussian(0.0, 0.05);
  return p;
}

void BM_density_build_merton(benchmark::State& state) {
  const ModelParams p = merton_params();
  for (auto _ : state)
    benchmark::DoNotOptimize(LogReturnDensity(p, 1.0 / 252.0, 5));
}

void BM_loglik_merton(benchmark::State& state) {
  const ModelParams p = merton_params();
  const SeriesGrid grid{1.0 / 252.0, std::size_t(state.range(0))};
  const LogReturnSeries data = simulate_logreturn_series(p, grid, 1);
  for (auto _ : state) benchmark::DoNotOptimize(loglik(data, p));
}

void BM_simulate_series(benchmark::State& state) {
  const ModelParams p = merton_params();
  const SeriesGrid grid{1.0 / 252.0, 5000};
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_logreturn_series(p, grid, ++seed));
}

}  // namespace

BENCHMARK(BM_density_build_merton)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_loglik_merton)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_series)->Unit(benchmark::kMillisecond);
