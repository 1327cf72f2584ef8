#include <benchmark/benchmark.h>

#include "tracenorm/bounds.hpp"

using namespace tracenorm;

namespace {

void BM_ClosedForms(benchmark::State& state) {
  BoundInputs in;
  in.shape = {4, 10, 10};
  in.ranks = {3, 4, 8};
  in.samples = 400;
  for (auto _ : state)
    for (BoundKind kind :
         {BoundKind::Overlapped, BoundKind::Latent, BoundKind::ScaledLatent, BoundKind::ScaledOverlapped})
      benchmark::DoNotOptimize(evaluate_bound(kind, in));
}
BENCHMARK(BM_ClosedForms);

void BM_DualNormMonteCarlo(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_dual_norm_expectation({4, 10, 10}, 50, trials, 1, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}
BENCHMARK(BM_DualNormMonteCarlo)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
