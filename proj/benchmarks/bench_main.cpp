#include <benchmark/benchmark.h>

#include "volterra/carleson.hpp"
#include "volterra/criteria.hpp"
#include "volterra/lattice.hpp"
#include "volterra/measure.hpp"
#include "volterra/norms.hpp"
#include "volterra/operator.hpp"

using namespace volterra;

namespace {

void BM_BallIntegrate(benchmark::State& state) {
  QuadratureConfig cfg;
  cfg.radialNodes = static_cast<int>(state.range(0));
  const RealFn g = [](const CVec& z) { return std::pow(std::abs(1.0 - 0.9 * z[0]), -2.5); };
  for (auto _ : state) benchmark::DoNotOptimize(ballIntegrate(g, 0.5, cfg));
}
BENCHMARK(BM_BallIntegrate)->Arg(32)->Arg(64)->Arg(128);

void BM_ApplyJbQuadrature(benchmark::State& state) {
  const Symbol b = Symbol::logKernel(CVec::unit(1));
  const Symbol f = Symbol::kernel(BallPoint(cplx(0.5, 0.5)), 1.5);
  const CVec z(cplx(0.9, -0.2));
  for (auto _ : state) benchmark::DoNotOptimize(applyJb(b, f, z));
}
BENCHMARK(BM_ApplyJbQuadrature);

void BM_HardyNorm(benchmark::State& state) {
  const Symbol f = Symbol::kernel(BallPoint(cplx(0.8)), 0.4);
  const QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(hardyNorm(f, 2.0, cfg).value);
}
BENCHMARK(BM_HardyNorm)->Unit(benchmark::kMillisecond);

void BM_BlochSeminorm(benchmark::State& state) {
  const Symbol b = Symbol::logKernel(CVec::unit(1));
  const QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(blochSeminorm(b, 1.0, cfg).value);
}
BENCHMARK(BM_BlochSeminorm)->Unit(benchmark::kMillisecond);

void BM_BuildLattice(benchmark::State& state) {
  const double r = state.range(0) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(buildLattice(r, 0.99, 1).size());
}
BENCHMARK(BM_BuildLattice)->Arg(5)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_KernelConstantAtomic(benchmark::State& state) {
  std::vector<BallPoint> pts;
  std::vector<double> masses;
  for (int k = 0; k < state.range(0); ++k) {
    pts.emplace_back(std::polar(1.0 - std::pow(10.0, -1.0 - 2.0 * k / state.range(0)), 0.7 * k));
    masses.push_back(1.0);
  }
  const MeasureSpec mu = MeasureSpec::atomic(pts, masses);
  const QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(carlesonKernelConstant(mu, 1.0, 1.0, cfg).value);
}
BENCHMARK(BM_KernelConstantAtomic)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CriterionItem2(benchmark::State& state) {
  SpaceParams sp;
  sp.p = 4.0;
  sp.q = 4.0;
  const QuadratureConfig cfg;
  const Symbol b = Symbol::polynomial({0.0, 1.0, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(criterionValue(b, sp, cfg).criterion.value);
}
BENCHMARK(BM_CriterionItem2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
