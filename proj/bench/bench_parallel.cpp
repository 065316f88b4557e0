// Serial reference vs OpenMP fan-out for the batch kernels.
#include <benchmark/benchmark.h>

#include "coulomb/exactlaws.hpp"
#include "coulomb/rmt.hpp"
#include "coulomb/sampler.hpp"

namespace {

cgas::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? cgas::Execution::Serial : cgas::Execution::Parallel;
}

void BM_Chains(benchmark::State& state) {
  const auto p = cgas::GasParameters::beta_ginibre(16, 2.0);
  cgas::SamplerConfig sc;
  sc.burn_in = 2000;
  sc.thin = 10;
  for (auto _ : state) {
    auto out = cgas::run_parallel_chains(p, sc, 8, 200, mode(state));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_SpectralRadius(benchmark::State& state) {
  for (auto _ : state) {
    auto rho = cgas::spectral_radius_batch(10000, 64, 3, mode(state));
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_GinibreSpectra(benchmark::State& state) {
  for (auto _ : state) {
    auto spectra = cgas::sample_spectra(cgas::Ensemble::Ginibre, 64, 0, 32, 5, mode(state));
    benchmark::DoNotOptimize(spectra.data());
  }
}

}  // namespace

// Arg 0 = serial reference, 1 = OpenMP
BENCHMARK(BM_Chains)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SpectralRadius)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GinibreSpectra)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
