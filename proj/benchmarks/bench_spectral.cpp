#include <benchmark/benchmark.h>

#include <cmath>

#include "fracheat/mollifier.hpp"
#include "fracheat/spectral.hpp"

using namespace fracheat;

namespace {

FracParams params(double theta, int dim) {
  FracParams p;
  p.theta = theta;
  p.n_dim = dim;
  return p;
}

void BM_FracLapSpectral1D(benchmark::State& state) {
  const Grid g(1, 16.0, static_cast<int>(state.range(0)));
  const Field f = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_fraclap_spectral(f, params(1.5, 1)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_FracLapSpectral1D)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

void BM_FracLapSpectral2D(benchmark::State& state) {
  const Grid g(2, 8.0, static_cast<int>(state.range(0)));
  const Field f = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_fraclap_spectral(f, params(1.5, 2)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_FracLapSpectral2D)->RangeMultiplier(2)->Range(64, 512);

void BM_FracLapPV(benchmark::State& state) {
  const Mollifier m(1, 1.0, 1.0 / 64);
  PvOptions opts;
  opts.supports.push_back({Point{}, 1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_fraclap_pv([&](const Point& y) { return m(y); }, Point{0.3, 0}, params(1.5, 1), 0.05, opts));
}
BENCHMARK(BM_FracLapPV);

void BM_Mollify(benchmark::State& state) {
  const Grid g(1, 8.0, 4096);
  const Mollifier m(1, 0.5, g.spacing());
  const Field f = Field::sample(g, [](const Point& x) { return std::abs(x[0]) < 1.0 ? 1.0 : 0.0; });
  for (auto _ : state) benchmark::DoNotOptimize(mollify(f, m));
}
BENCHMARK(BM_Mollify);

}  // namespace
