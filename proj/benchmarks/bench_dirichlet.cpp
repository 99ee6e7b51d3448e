#include <benchmark/benchmark.h>

#include "fracheat/dirichlet.hpp"

using namespace fracheat;

namespace {

void BM_DirichletAssemble(benchmark::State& state) {
  const BallGrid g(1, static_cast<int>(state.range(0)));
  const double theta = state.range(1) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(DirichletOperator::assemble(g, theta));
}
BENCHMARK(BM_DirichletAssemble)->Args({64, 20})->Args({64, 10})->Args({256, 10})->Unit(benchmark::kMillisecond);

void BM_DirichletKernelRow(benchmark::State& state) {
  const DirichletOperator op = DirichletOperator::assemble(BallGrid(1, 256), 1.0);
  const DirichletKernel g(op);
  for (auto _ : state) benchmark::DoNotOptimize(g.row(100, 0.3));
}
BENCHMARK(BM_DirichletKernelRow);

}  // namespace
