#include <benchmark/benchmark.h>

#include "rtdiff/autocorrelation.hpp"
#include "rtdiff/combs.hpp"
#include "rtdiff/transfer.hpp"

namespace {

using namespace rtdiff;

WeightedComb tripling_comb(std::int64_t n) {
  return build_comb(IntervalMap::linear_mod(3), Observable::identity(), 0.1234567, n,
                    OrbitOptions{.tail_seed = 7});
}

void BM_PeriodogramDirect(benchmark::State& state) {
  const auto n = state.range(0);
  const WeightedComb comb = tripling_comb(n);
  const std::vector<double> grid = fourier_grid(static_cast<std::size_t>(n));
  for (auto _ : state) benchmark::DoNotOptimize(periodogram(comb, n, grid));
  state.SetComplexityN(n);
}
BENCHMARK(BM_PeriodogramDirect)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_PeriodogramFourier(benchmark::State& state) {
  const auto n = state.range(0);
  const WeightedComb comb = tripling_comb(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(periodogram_fourier(comb, n, static_cast<std::size_t>(n)));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_PeriodogramFourier)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity();

void BM_BuildUlam(benchmark::State& state) {
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_ulam(IntervalMap::linear_mod(3), bins));
}
BENCHMARK(BM_BuildUlam)->RangeMultiplier(4)->Range(1 << 8, 1 << 14);

void BM_UlamSpectralData(benchmark::State& state) {
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ulam_spectral_data(IntervalMap::linear_mod(2), Observable::identity(), bins, 16));
  }
}
BENCHMARK(BM_UlamSpectralData)->Arg(1 << 12);

void BM_XiEmpirical(benchmark::State& state) {
  const auto horizon = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xi_empirical(IntervalMap::linear_mod(3), MeasureSpec::lebesgue(),
                                          Observable::identity(), 0.1234567, 16, horizon,
                                          OrbitOptions{.tail_seed = 7}));
  }
}
BENCHMARK(BM_XiEmpirical)->Arg(1 << 14)->Arg(1 << 17);

}  // namespace

BENCHMARK_MAIN();
