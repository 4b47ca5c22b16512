// Copyright 2026 The chanalloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "chanalloc/analysis.hpp"
#include "chanalloc/channel.hpp"
#include "chanalloc/graph.hpp"
#include "chanalloc/montecarlo.hpp"
#include "chanalloc/numerics.hpp"
#include "chanalloc/pver2hk.hpp"

namespace {

using namespace chanalloc;

// Resource block graph with M users over N subchannels, N / 4 bands.
BipartiteGraph bench_graph(int M, int N, std::uint64_t seed) {
  Rng rng(seed);
  return sample_rbg(0.4, M, N / 4, 4, rng);
}

void BM_HopcroftKarp(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const BipartiteGraph g = bench_graph(M, N, 1);
  const FProfile f{std::vector<int>(M, N / M)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_f_matching(g, f).size());
  }
}
BENCHMARK(BM_HopcroftKarp)->Args({2, 12})->Args({8, 64})->Args({32, 512});

void BM_Pver2hk(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const BipartiteGraph g = bench_graph(M, N, 2);
  const FProfile f{std::vector<int>(M, N / M)};
  Pver2hkOptions o;
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pver2hk(g, f, o, rng).size());
  }
}
BENCHMARK(BM_Pver2hk)->Args({2, 12})->Args({8, 64})->Args({32, 512});

void BM_GammaMoments(benchmark::State& state) {
  double a = -0.75;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_moments(a, 0.01, 0.5).scaled[0]);
  }
}
BENCHMARK(BM_GammaMoments);

void BM_SolveSaddle(benchmark::State& state) {
  SaddleInputs in;
  in.K = 4;
  in.k = 2;
  in.snr = 1e3;
  in.rc = 1.2 * std::log1p(in.snr) / 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_saddle(in).bound);
  }
}
BENCHMARK(BM_SolveSaddle);

void BM_RunTrial(benchmark::State& state) {
  const auto kind = static_cast<SchemeKind>(state.range(0));
  const SystemConfig c = kind == SchemeKind::kChunkCoded
                             ? SystemConfig::FromRates(3, 6, 6, {1.0, 1.0, 1.0}, 10.0)
                             : SystemConfig::FromRates(2, 6, 12, {6.0, 6.0}, 50.0);
  const SchemeSpec s{kind, {}};
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(c, s, rng).outage.data());
  }
}
BENCHMARK(BM_RunTrial)
    ->Arg(static_cast<int>(SchemeKind::kRbCoded))
    ->Arg(static_cast<int>(SchemeKind::kChunkCoded))
    ->Arg(static_cast<int>(SchemeKind::kInterleaved));

}  // namespace

BENCHMARK_MAIN();
