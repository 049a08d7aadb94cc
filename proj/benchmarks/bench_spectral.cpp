// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <benchmark/benchmark.h>

#include "ptspin/blocks.hpp"
#include "ptspin/model.hpp"
#include "ptspin/spectral.hpp"

namespace {

using namespace ptspin;

ModelParams broken() {
  ModelParams p;
  p.alpha = 0.36;
  return p;
}

// Largest block of the default system.
BlockLabel largest(const SystemSize& size) {
  const auto all = blocks::enumerate_blocks(size);
  return *std::max_element(all.begin(), all.end(),
                           [](const auto& a, const auto& b) { return a.dim() < b.dim(); });
}

void BM_BuildBlock(benchmark::State& state) {
  const ModelParams p = broken();
  const BlockLabel block = largest(p.size);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::build_block_hamiltonian(p, block));
  }
}
BENCHMARK(BM_BuildBlock);

void BM_DiagonalizeLargestBlock(benchmark::State& state) {
  const ModelParams p = broken();
  const BlockKey key = largest(p.size).key();
  SpectralOptions opts;
  opts.compute_vectors = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::diagonalize_block(p, key, opts));
  }
  state.counters["dim"] = static_cast<double>(key.dim());
}
BENCHMARK(BM_DiagonalizeLargestBlock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ComputeSpectrum(benchmark::State& state) {
  const ModelParams p = broken();
  SpectralOptions opts;
  opts.compute_vectors = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::compute_spectrum(p, opts));
  }
}
BENCHMARK(BM_ComputeSpectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EnumerateBlocks(benchmark::State& state) {
  const SystemSize size{HalfInt::from_int(static_cast<int>(state.range(0))), 2, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(blocks::completeness_sum(blocks::enumerate_blocks(size)));
  }
}
BENCHMARK(BM_EnumerateBlocks)->Arg(2)->Arg(4)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
