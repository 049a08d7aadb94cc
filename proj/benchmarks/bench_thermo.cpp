// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ptspin/spectral.hpp"
#include "ptspin/thermo.hpp"

namespace {

using namespace ptspin;

const ThermoEngine& engine() {
  static const ThermoEngine e = [] {
    ModelParams p;
    p.alpha = 0.36;
    return ThermoEngine(spectral::compute_spectrum(p));
  }();
  return e;
}

void BM_PartitionFunction(benchmark::State& state) {
  const ThermoEngine& e = engine();
  double beta = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.partition_function(beta));
  }
}
BENCHMARK(BM_PartitionFunction);

void BM_Potentials(benchmark::State& state) {
  const ThermoEngine& e = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.potentials(1.0));
  }
}
BENCHMARK(BM_Potentials);

void BM_PairingGap(benchmark::State& state) {
  const ThermoEngine& e = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.pairing_gap(1.0));
  }
}
BENCHMARK(BM_PairingGap);

void BM_FindZeros(benchmark::State& state) {
  const ThermoEngine& e = engine();
  const auto grid = thermo::logspace(0.01, 3.75, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(thermo::find_zeros(e, grid));
  }
}
BENCHMARK(BM_FindZeros)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
