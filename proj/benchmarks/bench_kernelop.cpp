#include <benchmark/benchmark.h>

#include <map>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/bidiagonalization.hpp"
#include "kernelop/direct_solvers.hpp"
#include "kernelop/grids.hpp"
#include "kernelop/krylov_solvers.hpp"
#include "kernelop/linalg.hpp"

using namespace kernelop;

namespace {

// Integral example at J = 100; range(0) is n0, so N = 100 n0.
const Dataset& dataset(int n0) {
  static std::map<int, Dataset> cache;
  auto it = cache.find(n0);
  if (it == cache.end()) {
    it = cache.emplace(n0, generate_dataset(Example::Integral, true_kernel(Example::Integral), 100, 100, n0, 0.1, 1))
             .first;
  }
  return it->second;
}

void BM_Assemble(benchmark::State& state) {
  const Dataset& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(d.g, d.f, d.grids.ds));
  state.SetComplexityN(d.rows());
}
BENCHMARK(BM_Assemble)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_EigenDecompose(benchmark::State& state) {
  const Dataset& d = dataset(static_cast<int>(state.range(0)));
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_decompose(sys.sigma));
}
BENCHMARK(BM_EigenDecompose)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SigmaGkb(benchmark::State& state) {
  const Dataset& d = dataset(static_cast<int>(state.range(0)));
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  const int steps = static_cast<int>(state.range(1));
  for (auto _ : state) {
    SigmaGkb gkb(sys.sigma, steps + 1);
    gkb.start(sys.f);
    while (gkb.steps() <= steps && gkb.extend()) {
    }
    benchmark::DoNotOptimize(gkb.alphas().data());
  }
}
BENCHMARK(BM_SigmaGkb)->Args({12, 30})->Args({24, 30})->Args({24, 50})->Unit(benchmark::kMillisecond);

void BM_TikhonovLCurve(benchmark::State& state) {
  const Dataset& d = dataset(static_cast<int>(state.range(0)));
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  const EigenSystem eig = eigen_decompose(sys.sigma);
  for (auto _ : state) benchmark::DoNotOptimize(tikhonov_lcurve(sys, eig));
}
BENCHMARK(BM_TikhonovLCurve)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_IterativeLCurve(benchmark::State& state) {
  const Dataset& d = dataset(static_cast<int>(state.range(0)));
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  SolverParams p;
  p.l_max = 40;
  for (auto _ : state) benchmark::DoNotOptimize(run_iterative(sys, StopRule::LCurve, p));
}
BENCHMARK(BM_IterativeLCurve)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Hybrid(benchmark::State& state) {
  const Dataset& d = dataset(static_cast<int>(state.range(0)));
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  SolverParams p;
  p.l_max = 40;
  for (auto _ : state) benchmark::DoNotOptimize(run_hybrid(sys, p));
}
BENCHMARK(BM_Hybrid)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
