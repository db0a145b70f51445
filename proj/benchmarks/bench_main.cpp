// Throughput of the evaluation kernels and the scaling scans built on them.

#include <benchmark/benchmark.h>

#include <cmath>

#include "tanglab/counterexamples.hpp"
#include "tanglab/kernel.hpp"
#include "tanglab/maximal.hpp"
#include "tanglab/parallel.hpp"
#include "tanglab/propagator.hpp"
#include "tanglab/theta.hpp"
#include "tanglab/wavepacket.hpp"

using namespace tanglab;

namespace {

BandlimitedField annulus(int dim, double R) {
  FieldRecipe r;
  r.kind = RecipeKind::random_annulus;
  r.dim = dim;
  r.R = R;
  r.resolution = 8.0;
  r.seed = 1;
  return make_field(r);
}

// Atom-point products per second for direct summation.
void BM_Evolve(benchmark::State& state) {
  const auto f = annulus(1, static_cast<double>(state.range(0)));
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < 1024; ++i) pts.push_back({{i / 1024.0, 0.0}, 1e-4 * i / 1024.0});
  for (auto _ : state) benchmark::DoNotOptimize(evolve(f, SymbolSpec::paraboloid(), pts));
  state.counters["atoms"] = static_cast<double>(f.size());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size() * f.size()));
}
BENCHMARK(BM_Evolve)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

void BM_EvolveThreads(benchmark::State& state) {
  set_worker_count(static_cast<unsigned>(state.range(0)));
  const auto f = annulus(2, 16.0);
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < 4096; ++i) pts.push_back({{i / 4096.0, 0.5 - i / 8192.0}, 1e-3 * i / 4096.0});
  for (auto _ : state) benchmark::DoNotOptimize(evolve(f, SymbolSpec::paraboloid(), pts));
  set_worker_count(0);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size() * f.size()));
}
BENCHMARK(BM_EvolveThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

// Cost of one maximal-function ratio at scale lambda.
void BM_OperatorRatio(benchmark::State& state) {
  const double lam = static_cast<double>(state.range(0));
  BatteryOptions o;
  o.names = {"ball"};
  const auto w = witness_battery(o).front();
  const auto f = w.field(lam);
  const auto g = w.grid(lam);
  const auto curve = CurveSpec::power_shift({1.0, 0.0}, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(operator_ratio(f, SymbolSpec::paraboloid(), curve, g, 2.0, 0.25));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OperatorRatio)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oAuto);

void BM_BoxCount(benchmark::State& state) {
  const auto theta = ThetaSet::sequence();
  const double d = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(box_count(theta, d));
}
BENCHMARK(BM_BoxCount)->DenseRange(8, 20, 4);

void BM_KernelAnalytic(benchmark::State& state) {
  const KernelArgs a{0.01, 1e-4, static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_analytic(a));
}
BENCHMARK(BM_KernelAnalytic)->Arg(256)->Arg(4096);

void BM_KernelQuadrature(benchmark::State& state) {
  const KernelArgs a{0.01, 1e-4, static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_quadrature(a));
}
BENCHMARK(BM_KernelQuadrature)->Arg(256)->Arg(4096);

void BM_BourgainSup(benchmark::State& state) {
  const BourgainWitness w{static_cast<double>(state.range(0))};
  const BourgainEvaluator ev(w);
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.sup_time({x, -0.2}));
    x += 1e-3;
  }
}
BENCHMARK(BM_BourgainSup)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMicrosecond);

void BM_Decompose(benchmark::State& state) {
  FieldRecipe r;
  r.kind = RecipeKind::gaussian;
  r.dim = 2;
  r.sigma = 0.25;
  r.extent = 1.0;
  r.resolution = 16.0;
  const auto f = make_field(r);
  GaborSystem sys;
  sys.R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f, sys, sys.R));
}
BENCHMARK(BM_Decompose)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BroadNorm(benchmark::State& state) {
  FieldRecipe r;
  r.kind = RecipeKind::random_annulus;
  r.dim = 2;
  r.R = 1.0;
  r.resolution = 32.0;
  const auto f = make_field(r);
  BroadParams p;
  p.A = static_cast<int>(state.range(0));
  BroadDomain d;
  d.R = 4.0;
  d.quad = 2;
  for (auto _ : state) benchmark::DoNotOptimize(broad_norm(f, p, d));
}
BENCHMARK(BM_BroadNorm)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
