#include <random>

#include <benchmark/benchmark.h>

#include "nmqem/channel.hpp"
#include "nmqem/gamma.hpp"
#include "nmqem/kernel.hpp"
#include "nmqem/recovery.hpp"

using namespace nmqem;

static void BM_MatInv4(benchmark::State& state) {
  const CMat v = population_channel(Gate::kSwap, 0.05).matrix.to_cmat();
  for (auto _ : state) benchmark::DoNotOptimize(mat_inv(v));
}
BENCHMARK(BM_MatInv4);

static void BM_MatInv16(benchmark::State& state) {
  const CMat f = build_gamma_basis().flattened();
  for (auto _ : state) benchmark::DoNotOptimize(mat_inv(f));
}
BENCHMARK(BM_MatInv16);

static void BM_Decompose(benchmark::State& state) {
  const GammaBasis b = build_gamma_basis();
  const CMat r = recovery_numeric(population_channel(Gate::kIdentity, 0.05)).to_cmat();
  for (auto _ : state) benchmark::DoNotOptimize(decompose(b, r));
}
BENCHMARK(BM_Decompose);

static void BM_MakeRecovery(benchmark::State& state) {
  const GammaBasis b = build_gamma_basis();
  for (auto _ : state) benchmark::DoNotOptimize(make_recovery(Gate::kSwap, 0.05, b));
}
BENCHMARK(BM_MakeRecovery);

static void BM_SiShifted(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(si_shifted(x + 0.5));
}
BENCHMARK(BM_SiShifted)->Arg(1)->Arg(10)->Arg(1000);

static void BM_KPrinted(benchmark::State& state) {
  const KernelParams p{1.0, 1.0, 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(k_printed(p, 1.0));
}
BENCHMARK(BM_KPrinted);

static void BM_KQuadrature(benchmark::State& state) {
  const KernelParams p{1.0, 1.0, 10.0};
  const double u = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(k_quadrature(p, u));
}
BENCHMARK(BM_KQuadrature)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_PopulationChannel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(population_channel(Gate::kSwap, 0.05));
}
BENCHMARK(BM_PopulationChannel);

BENCHMARK_MAIN();
