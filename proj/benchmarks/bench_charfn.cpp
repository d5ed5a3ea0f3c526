#include <benchmark/benchmark.h>

#include "mrjd/charfn.hpp"

using namespace mrjd;

namespace {

ModelParams bsch_params() {
  ModelParams p;
  p.alpha = 5.0;
  p.mu = 0.02;
  p.sigma = 0.4;
  return p;
}

ModelParams merton_params() {
  ModelParams p = bsch_params();
  p.lambda = 20.0;
  p.jumps = JumpSpec::gaussian(0.0, 0.05);
  return p;
}

ModelParams kou_params() {
  ModelParams p = bsch_params();
  p.lambda = 20.0;
  p.jumps = JumpSpec::double_exponential(15.0, 10.0, 0.4);
  return p;
}

void BM_cf_logreturn_bsch(benchmark::State& state) {
  const ModelParams p = bsch_params();
  double u = 0.0;
  for (auto _ : state) {
    u += 0.1;
    benchmark::DoNotOptimize(
        cf_logreturn(p, 0.0, 1.0 / 252.0, 20, cplx(u, 0.0)));
  }
}

void BM_cf_logreturn_merton(benchmark::State& state) {
  const ModelParams p = merton_params();
  double u = 0.0;
  for (auto _ : state) {
    u += 0.1;
    benchmark::DoNotOptimize(
        cf_logreturn(p, 0.0, 1.0 / 252.0, 20, cplx(u, 0.0)));
  }
}

void BM_cf_logreturn_kou(benchmark::State& state) {
  const ModelParams p = kou_params();
  double u = 0.0;
  for (auto _ : state) {
    u += 0.1;
    benchmark::DoNotOptimize(
        cf_logreturn(p, 0.0, 1.0 / 252.0, 20, cplx(u, 0.0)));
  }
}

void BM_cf_logprice_kou_complex(benchmark::State& state) {
  const ModelParams p = kou_params();
  double x = 0.0;
  for (auto _ : state) {
    x += 0.2;
    benchmark::DoNotOptimize(cf_logprice(p, 0.1, 1.0, cplx(-x, -1.25)));
  }
}

}  // namespace

BENCHMARK(BM_cf_logreturn_bsch);
BENCHMARK(BM_cf_logreturn_merton);
BENCHMARK(BM_cf_logreturn_kou);
BENCHMARK(BM_cf_logprice_kou_complex);

BENCHMARK_MAIN();
