#include <benchmark/benchmark.h>

#include <random>

#include "tracenorm/design.hpp"
#include "tracenorm/solvers.hpp"
#include "tracenorm/toy_data.hpp"

using namespace tracenorm;

namespace {

Dataset toy(ToySetup setup, std::size_t m) {
  ToyRegressionSpec spec;
  spec.setup = setup;
  spec.m_train = m;
  spec.m_val = 1;
  spec.m_test = 1;
  spec.seed = 3;
  return gen_toy_regression(spec).train;
}

SolverConfig scaled(double lambda) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.beta_rule = BetaRule::LambdaScaled;
  cfg.record_trace = false;
  return cfg;
}

void BM_DualAdmmStep(benchmark::State& state) {
  const Dataset d = toy(ToySetup::A, static_cast<std::size_t>(state.range(0)));
  const Design design(d);
  DualAdmm admm(design, NormKind::scaled_latent(d.shape()), scaled(1.0));
  admm.step();
  for (auto _ : state) admm.step();
}
BENCHMARK(BM_DualAdmmStep)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_OverlappedAdmmStep(benchmark::State& state) {
  const Dataset d = toy(ToySetup::A, static_cast<std::size_t>(state.range(0)));
  const Design design(d);
  OverlappedAdmm admm(design, NormKind::overlapped(d.shape()), scaled(1.0));
  admm.step();
  for (auto _ : state) admm.step();
}
BENCHMARK(BM_OverlappedAdmmStep)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_DualityGap(benchmark::State& state) {
  const Dataset d = toy(ToySetup::C, 400);
  const Design design(d);
  DualAdmm admm(design, NormKind::latent(d.shape()), scaled(1.0));
  admm.step();
  for (auto _ : state) benchmark::DoNotOptimize(admm.duality_gap());
}
BENCHMARK(BM_DualityGap)->Unit(benchmark::kMicrosecond);

void BM_FitScaledLatent(benchmark::State& state) {
  const Dataset d = toy(ToySetup::C, 400);
  const Design design(d);
  for (auto _ : state) benchmark::DoNotOptimize(fit(design, NormKind::scaled_latent(d.shape()), scaled(1.0)));
}
BENCHMARK(BM_FitScaledLatent)->Unit(benchmark::kMillisecond);

void BM_FitRidge(benchmark::State& state) {
  const Dataset d = toy(ToySetup::C, 400);
  const Design design(d);
  for (auto _ : state) benchmark::DoNotOptimize(fit_ridge(design, 1.0));
}
BENCHMARK(BM_FitRidge)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
