#include <benchmark/benchmark.h>

#include "fracheat/solver.hpp"

using namespace fracheat;

namespace {

SolverConfig config(int points) {
  SolverConfig c;
  c.params.theta = 2.0;
  c.params.n_dim = 1;
  c.params.p_exponent = 3.0;
  c.grid = Grid(1, 16.0, points);
  c.t_end = 0.25;
  c.dt_init = c.t_end / 64;
  return c;
}

void BM_IntegrateSmallData(benchmark::State& state) {
  const SolverConfig c = config(static_cast<int>(state.range(0)));
  const MeasureSpec mu = MeasureSpec::single_atom(1, Point{0.3, 0}, 0.5);
  for (auto _ : state) {
    const Trajectory tr = integrate(c, mu);
    state.counters["steps"] = tr.steps;
  }
}
BENCHMARK(BM_IntegrateSmallData)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_PicardSmallData(benchmark::State& state) {
  const SolverConfig c = config(2048);
  const MeasureSpec mu = MeasureSpec::single_atom(1, Point{0.3, 0}, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(picard_duhamel(c, mu, c.max_iter));
}
BENCHMARK(BM_PicardSmallData)->Unit(benchmark::kMillisecond);

}  // namespace
