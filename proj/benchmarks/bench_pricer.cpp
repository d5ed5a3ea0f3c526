#include <benchmark/benchmark.h>

#include "mrjd/pricer.hpp"

using namespace mrjd;

namespace {

ModelParams kou_params() {
  ModelParams p;
  p.alpha = 2.0;
  p.mu = 0.0;
  p.sigma = 0.25;
  p.lambda = 8.0;
  p.jumps = JumpSpec::double_exponential(12.0, 9.0, 0.45);
  return p;
}

void BM_price_quadrature_kou(benchmark::State& state) {
  const ModelParams p = kou_params();
  const MarketParams mkt{0.02, 1.0, 100.0};
  const OptionSpec opt{100.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(price_call_quadrature(p, mkt, opt));
}

void BM_price_fft_ladder_kou(benchmark::State& state) {
  const ModelParams p = kou_params();
  const MarketParams mkt{0.02, 1.0, 100.0};
  const OptionSpec opt{100.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(price_call_fft(p, mkt, opt));
}

}  // namespace

BENCHMARK(BM_price_quadrature_kou)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_price_fft_ladder_kou)->Unit(benchmark::kMillisecond);
