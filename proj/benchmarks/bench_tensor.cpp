#include <benchmark/benchmark.h>

#include <random>

#include "tracenorm/linalg.hpp"
#include "tracenorm/tensor.hpp"

using namespace tracenorm;

namespace {

DenseTensor cube(std::size_t n) {
  std::mt19937_64 rng(1);
  return gaussian_tensor({n, n, n}, rng);
}

void BM_Unfold(benchmark::State& state) {
  const DenseTensor t = cube(static_cast<std::size_t>(state.range(0)));
  const auto mode = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(unfold(t, mode));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * t.size() * sizeof(double)));
}
BENCHMARK(BM_Unfold)->ArgsProduct({{10, 30}, {0, 1, 2}});

void BM_FoldRoundTrip(benchmark::State& state) {
  const DenseTensor t = cube(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fold(unfold(t, 1), 1, t.shape()));
}
BENCHMARK(BM_FoldRoundTrip)->Arg(10)->Arg(30);

void BM_ThinSvd(benchmark::State& state) {
  const DenseTensor t = cube(static_cast<std::size_t>(state.range(0)));
  const Matrix m = unfold(t, 0);
  for (auto _ : state) benchmark::DoNotOptimize(thin_svd(m));
}
BENCHMARK(BM_ThinSvd)->Arg(4)->Arg(10)->Arg(20);

void BM_SvClip(benchmark::State& state) {
  const Matrix m = unfold(cube(10), 0);
  for (auto _ : state) benchmark::DoNotOptimize(sv_clip(m, 1.0));
}
BENCHMARK(BM_SvClip);

void BM_SpectralNorm(benchmark::State& state) {
  const Matrix m = unfold(cube(static_cast<std::size_t>(state.range(0))), 0);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(m));
}
BENCHMARK(BM_SpectralNorm)->Arg(10)->Arg(20);

void BM_OverlappedNorm(benchmark::State& state) {
  const DenseTensor t = cube(10);
  const auto w = unit_weights(t.shape());
  for (auto _ : state) benchmark::DoNotOptimize(overlapped_norm(t, w));
}
BENCHMARK(BM_OverlappedNorm);

}  // namespace

BENCHMARK_MAIN();
