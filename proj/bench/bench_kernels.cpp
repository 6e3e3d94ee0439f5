// Copyright 2026 The dnl Authors
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

// Serial reference kernels against their OpenMP counterparts on a
// weighted-knapsack batch.

#include <benchmark/benchmark.h>

#include "dnl/data.hpp"
#include "dnl/kernels.hpp"
#include "dnl/ridge.hpp"
#include "dnl/trainer.hpp"

namespace {

struct Fixture {
  dnl::Dataset dataset;
  dnl::LinearModel model;

  Fixture() {
    const auto series = dnl::Synthesize(32, 4, 1.0, 7);
    dataset = dnl::MakeKnapsack(series, true, 72.0, 7);
    model = dnl::FitRidge(dataset.problem_sets, {0.1, true});
  }
};

const Fixture& Shared() {
  static const Fixture fixture;
  return fixture;
}

void BM_ExtractProfiles(benchmark::State& state, dnl::Execution execution) {
  const auto& f = Shared();
  const auto batch = dnl::AsBatch(f.dataset.problem_sets);
  const auto spec = dnl::SearchSpecAround(f.model.coefficient(0));
  for (auto _ : state) {
    dnl::Oracle oracle;
    auto profiles = dnl::ExtractProfiles(batch, f.model, 0, spec, oracle,
                                         dnl::Extraction::kFull, execution);
    benchmark::DoNotOptimize(profiles);
  }
}

void BM_SelectFull(benchmark::State& state, dnl::Execution execution) {
  const auto& f = Shared();
  const auto batch = dnl::AsBatch(f.dataset.problem_sets);
  const auto spec = dnl::SearchSpecAround(f.model.coefficient(0));
  dnl::Oracle oracle;
  const auto profiles = dnl::ExtractProfiles(
      batch, f.model, 0, spec, oracle, dnl::Extraction::kFull, execution);
  const auto candidates =
      dnl::CandidateBetas(profiles, f.model.coefficient(0));
  for (auto _ : state) {
    auto chosen = dnl::SelectBetaFull(candidates, batch, f.model, 0, oracle,
                                      execution);
    benchmark::DoNotOptimize(chosen);
  }
}

BENCHMARK_CAPTURE(BM_ExtractProfiles, serial, dnl::Execution::kSerial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ExtractProfiles, omp, dnl::Execution::kParallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SelectFull, serial, dnl::Execution::kSerial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SelectFull, omp, dnl::Execution::kParallel)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
