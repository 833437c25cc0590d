#include <benchmark/benchmark.h>

#include "gaminv/image_ops.hpp"
#include "gaminv/invariant_image.hpp"
#include "gaminv/synth.hpp"
#include "gaminv/template_matching.hpp"

using namespace gaminv;

static void BM_Convolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField img = synth_image(SynthKind::ripple, 1, n, n);
  const Kernel k = gaussian_kernel(1.0, 7, {2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(convolve(img, k));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Convolve)->Arg(128)->Arg(256)->Arg(512);

static void BM_Invariant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const InvariantKind kind = state.range(1) ? InvariantKind::m123g : InvariantKind::m12g;
  const ScalarField img = synth_image(SynthKind::gaussians, 1, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(compute_invariant(img, kind));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Invariant)->Args({128, 0})->Args({128, 1})->Args({256, 0})->Args({256, 1});

static void BM_CorrelationAccuracy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField img = synth_image(SynthKind::checker_blur, 1, n, n);
  const ScalarField tgt = gamma_correct(img, 0.6, 255.0, true);
  const TemplateSize size{static_cast<int>(state.range(1)), static_cast<int>(state.range(2))};
  for (auto _ : state) benchmark::DoNotOptimize(correlation_accuracy(img, tgt, size));
}
BENCHMARK(BM_CorrelationAccuracy)->Args({48, 6, 8})->Args({64, 6, 8})->Args({64, 10, 10})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
