// Copyright 2026 The matprod Authors.
//
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

#include <benchmark/benchmark.h>

#include <vector>

#include "matprod/model.hpp"
#include "matprod/monte_carlo.hpp"
#include "matprod/path_moments.hpp"
#include "matprod/rng.hpp"

namespace {

using namespace matprod;

EnsembleConfig square(std::size_t n, std::size_t depth, double p) {
  return EnsembleConfig(Architecture(std::vector<std::size_t>(depth + 1, n)), p, DistributionSpec::gaussian());
}

// One log-norm sample; the inner loop of every Monte Carlo run.
void BM_SampleLogNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto config = square(n, 16, 1.0);
  const auto u = UnitVector::uniform(n);
  RngStream rng = make_stream(1, 0, StreamDomain::ProductEnsemble);
  for (auto _ : state) benchmark::DoNotOptimize(sample_log_norm(config, u, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(16 * n * n));
}
BENCHMARK(BM_SampleLogNorm)->Arg(8)->Arg(32)->Arg(64);

void BM_RunTrials(benchmark::State& state) {
  const auto config = square(32, 8, 0.5);
  const auto u = UnitVector::uniform(32);
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(config, u, 2000, 3, RunOptions{1}));
}
BENCHMARK(BM_RunTrials)->Unit(benchmark::kMillisecond);

void BM_ExactMoment(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto config = square(3, 3, 0.5);
  const auto u = UnitVector::uniform(3);
  for (auto _ : state) benchmark::DoNotOptimize(exact_moment(config, u, k));
}
BENCHMARK(BM_ExactMoment)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_BruteForceMoment(benchmark::State& state) {
  const auto config = square(3, 3, 0.5);
  const auto u = UnitVector::uniform(3);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_moment(config, u, 2));
}
BENCHMARK(BM_BruteForceMoment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
