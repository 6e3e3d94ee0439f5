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

#include "dnl/kernels.hpp"

namespace dnl {

Batch AsBatch(std::span<const ProblemSet> problems) {
  Batch batch;
  batch.reserve(problems.size());
  for (const auto& p : problems) batch.push_back(&p);
  return batch;
}

namespace serial {

std::vector<TransitionProfile> ExtractProfiles(const Batch& batch,
                                               const LinearModel& model,
                                               std::size_t beta_index,
                                               const SearchSpec& spec,
                                               const Oracle& oracle,
                                               Extraction extraction) {
  const double beta_old = model.coefficient(beta_index);
  std::vector<TransitionProfile> out;
  out.reserve(batch.size());
  for (const ProblemSet* problem : batch) {
    out.push_back(extraction == Extraction::kFull
                      ? ExtractFull(model, *problem, beta_index, spec, oracle)
                      : ExtractGreedy(model, *problem, beta_index, spec,
                                      oracle, beta_old));
  }
  return out;
}

std::vector<double> EvaluateRegrets(std::span<const CoordinateLine> lines,
                                    std::span<const RegretQuery> queries,
                                    const Oracle& oracle) {
  std::vector<double> out(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& line = lines[queries[q].problem];
    out[q] = RegretOfPrediction(line.At(queries[q].beta), line.problem(),
                                oracle)
                 .regret;
  }
  return out;
}

std::vector<double> ModelRegrets(const LinearModel& model, const Batch& batch,
                                 const Oracle& oracle) {
  std::vector<double> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out[i] = RegretOf(model, *batch[i], oracle).regret;
  }
  return out;
}

}  // namespace serial
}  // namespace dnl
