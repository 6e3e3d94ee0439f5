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

// Batch kernels of the training loop. Each kernel has a serial reference
// implementation and an OpenMP implementation; both write results into
// fixed slots so their outputs are bit-identical.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dnl/core.hpp"
#include "dnl/oracle.hpp"
#include "dnl/regret.hpp"
#include "dnl/transition.hpp"

namespace dnl {

enum class Execution { kSerial, kParallel };

using Batch = std::vector<const ProblemSet*>;

// Regret of problem `lines[problem]` with the free parameter set to `beta`.
struct RegretQuery {
  std::size_t problem = 0;
  double beta = 0.0;
};

enum class Extraction { kFull, kGreedy };

namespace serial {
std::vector<TransitionProfile> ExtractProfiles(const Batch& batch,
                                               const LinearModel& model,
                                               std::size_t beta_index,
                                               const SearchSpec& spec,
                                               const Oracle& oracle,
                                               Extraction extraction);
std::vector<double> EvaluateRegrets(std::span<const CoordinateLine> lines,
                                    std::span<const RegretQuery> queries,
                                    const Oracle& oracle);
std::vector<double> ModelRegrets(const LinearModel& model, const Batch& batch,
                                 const Oracle& oracle);
}  // namespace serial

namespace omp {
std::vector<TransitionProfile> ExtractProfiles(const Batch& batch,
                                               const LinearModel& model,
                                               std::size_t beta_index,
                                               const SearchSpec& spec,
                                               const Oracle& oracle,
                                               Extraction extraction);
std::vector<double> EvaluateRegrets(std::span<const CoordinateLine> lines,
                                    std::span<const RegretQuery> queries,
                                    const Oracle& oracle);
std::vector<double> ModelRegrets(const LinearModel& model, const Batch& batch,
                                 const Oracle& oracle);
}  // namespace omp

inline std::vector<TransitionProfile> ExtractProfiles(
    const Batch& batch, const LinearModel& model, std::size_t beta_index,
    const SearchSpec& spec, const Oracle& oracle, Extraction extraction,
    Execution execution) {
  return execution == Execution::kSerial
             ? serial::ExtractProfiles(batch, model, beta_index, spec, oracle,
                                       extraction)
             : omp::ExtractProfiles(batch, model, beta_index, spec, oracle,
                                    extraction);
}

inline std::vector<double> EvaluateRegrets(
    std::span<const CoordinateLine> lines,
    std::span<const RegretQuery> queries, const Oracle& oracle,
    Execution execution) {
  return execution == Execution::kSerial
             ? serial::EvaluateRegrets(lines, queries, oracle)
             : omp::EvaluateRegrets(lines, queries, oracle);
}

inline std::vector<double> ModelRegrets(const LinearModel& model,
                                        const Batch& batch,
                                        const Oracle& oracle,
                                        Execution execution) {
  return execution == Execution::kSerial
             ? serial::ModelRegrets(model, batch, oracle)
             : omp::ModelRegrets(model, batch, oracle);
}

Batch AsBatch(std::span<const ProblemSet> problems);

}  // namespace dnl
