#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "discdyn/chaos.hpp"
#include "discdyn/foliation.hpp"
#include "discdyn/poisson.hpp"

namespace {

using namespace discdyn;

BoundaryFunction pieces(int n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> cuts;
  std::vector<Complex> values;
  for (int i = 0; i < n; ++i) {
    cuts.push_back(kTwoPi * i / n);
    values.emplace_back(0.7 * u(rng), 0.7 * u(rng));
  }
  return BoundaryFunction(std::move(cuts), std::move(values));
}

void BM_Extend(benchmark::State& state) {
  const BoundaryFunction f = pieces(static_cast<int>(state.range(0)));
  const Complex z(0.3, -0.6);
  for (auto _ : state) benchmark::DoNotOptimize(extend(f, z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Extend)->RangeMultiplier(4)->Range(4, 4096)->Complexity(benchmark::oN);

void BM_CircleSup(benchmark::State& state) {
  const BoundaryFunction f = pieces(64);
  const double r = 1.0 - 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(circle_sup(f, r, 1e-10));
}
BENCHMARK(BM_CircleSup)->Arg(2)->Arg(10)->Arg(40);

void BM_MetricNorm(benchmark::State& state) {
  const HarmonicFunction phi(pieces(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(metric_norm(phi));
}
BENCHMARK(BM_MetricNorm)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PullBack(benchmark::State& state) {
  const BoundaryFunction f = pieces(256);
  const CircleMap h = CircleMap::from(MoebiusElement::hyperbolic(3.0));
  for (auto _ : state) benchmark::DoNotOptimize(f.pull_back(h));
}
BENCHMARK(BM_PullBack);

void BM_DenseReport(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const DenseOrbitSchedule s = make_schedule(2.0, levels);
  const TargetFamily family(levels, 0);
  for (auto _ : state) benchmark::DoNotOptimize(dense_orbit_report(family, s));
}
BENCHMARK(BM_DenseReport)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_PeriodicReport(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const BoundaryFunction f = pieces(12);
  const MoebiusElement gamma = MoebiusElement::hyperbolic(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(periodic_report(f, eps, gamma));
}
BENCHMARK(BM_PeriodicReport)->Arg(3)->Arg(10)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_OrbitSample(benchmark::State& state) {
  const FuchsianGroup g = genus2_group();
  for (auto _ : state) benchmark::DoNotOptimize(orbit_sample(g, Arc(1.0, kPi), 200, static_cast<int>(state.range(0)), 1));
}
BENCHMARK(BM_OrbitSample)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
