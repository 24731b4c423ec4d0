// Microbenchmarks for the hot paths: the elastic search in both modes, the
// presmoothers, and the restricted-likelihood fit.

#include <benchmark/benchmark.h>

#include <vector>

#include "eawarp/align.hpp"
#include "eawarp/grid.hpp"
#include "eawarp/lmm.hpp"
#include "eawarp/preprocess.hpp"
#include "eawarp/rng.hpp"
#include "eawarp/simulate.hpp"
#include "eawarp/warping.hpp"

using namespace eawarp;

namespace {

SampledFunction bench_curve(int n, std::uint64_t salt) {
  SplitMix64 rng = SplitMix64::stream(77, static_cast<std::uint64_t>(n), salt);
  return generate_target(n, static_cast<double>(n - 1), rng);
}

void BM_SrvfAlignWindowed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = bench_curve(n, 0);
  const auto y = bench_curve(n, 1);
  const auto bound =
      NormalizedBound::native(0.1 * static_cast<double>(n - 1), static_cast<double>(n - 1));
  for (auto _ : state) {
    const auto r = align_srvf(x, y, bound, DpMode::windowed(7));
    benchmark::DoNotOptimize(r.cost);
  }
}
BENCHMARK(BM_SrvfAlignWindowed)->Arg(101)->Arg(301)->Unit(benchmark::kMillisecond);

void BM_SrvfAlignExhaustive(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = bench_curve(n, 0);
  const auto y = bench_curve(n, 1);
  for (auto _ : state) {
    const auto r =
        align_srvf(x, y, NormalizedBound::unbounded(), DpMode::exhaustive_mode());
    benchmark::DoNotOptimize(r.cost);
  }
}
BENCHMARK(BM_SrvfAlignExhaustive)->Arg(41)->Arg(61)->Unit(benchmark::kMillisecond);

void BM_FixedDelayScan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = bench_curve(n, 0);
  const auto y = bench_curve(n, 1);
  const auto bound =
      NormalizedBound::native(0.1 * static_cast<double>(n - 1), static_cast<double>(n - 1));
  for (auto _ : state) {
    const auto r = align_fixed_delay(x, y, bound);
    benchmark::DoNotOptimize(r.cost);
  }
}
BENCHMARK(BM_FixedDelayScan)->Arg(301)->Unit(benchmark::kMillisecond);

void BM_KernelSmooth(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = bench_curve(n, 0);
  for (auto _ : state) {
    const auto s = kernel_smooth(f, 10.0);
    benchmark::DoNotOptimize(s.values().data());
  }
}
BENCHMARK(BM_KernelSmooth)->Arg(300)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_SplineGcv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = bench_curve(n, 0);
  for (auto _ : state) {
    const auto s = spline_smooth_gcv(f);
    benchmark::DoNotOptimize(s.values().data());
  }
}
BENCHMARK(BM_SplineGcv)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_FitReml(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const int n = 100;
  MixedModelData data;
  SplitMix64 rng = SplitMix64::stream(78, static_cast<std::uint64_t>(J), 0);
  for (int j = 0; j < J; ++j) {
    auto x = generate_target(n, static_cast<double>(n - 1), rng);
    std::vector<double> yv(static_cast<size_t>(n));
    const double b0 = 0.6 * rng.normal(), b1 = 0.3 * rng.normal();
    for (int i = 0; i < n; ++i)
      yv[static_cast<size_t>(i)] = 1.0 + 0.8 * x[i] + b0 + b1 * x[i] + 0.5 * rng.normal();
    data.y.emplace_back(x.grid(), std::move(yv));
    data.x.push_back(std::move(x));
    data.warpings.push_back(WarpingFunction::identity(n));
  }
  for (auto _ : state) {
    const auto fit = fit_reml(data);
    benchmark::DoNotOptimize(fit.reml_loglik);
  }
}
BENCHMARK(BM_FitReml)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
