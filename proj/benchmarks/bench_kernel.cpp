#include <benchmark/benchmark.h>

#include "fracheat/kernel.hpp"

using namespace fracheat;

namespace {

const KernelEvaluator& kernel(double theta) {
  FracParams p;
  p.theta = theta;
  p.n_dim = 1;
  return shared_kernel(p);
}

void BM_KernelInvert(benchmark::State& state) {
  const KernelEvaluator& k = kernel(1.5);
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.eval_gamma(Point{r, 0}, 1.0));
    r = r < 30 ? r + 0.37 : 0.1;
  }
}
BENCHMARK(BM_KernelInvert);

void BM_KernelFast(benchmark::State& state) {
  const KernelEvaluator& k = kernel(1.5);
  k.eval_fast(Point{}, 1.0);  // table build outside the loop
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.eval_fast(Point{r, 0}, 0.7));
    r = r < 30 ? r + 0.37 : 0.1;
  }
}
BENCHMARK(BM_KernelFast);

void BM_KernelPeriodic(benchmark::State& state) {
  const KernelEvaluator& k = kernel(1.5);
  k.eval_fast(Point{}, 1.0);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.eval_periodic(Point{x, 0}, 0.05, 16.0));
    x = x < 15 ? x + 0.41 : 0.0;
  }
}
BENCHMARK(BM_KernelPeriodic);

}  // namespace
