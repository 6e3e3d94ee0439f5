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

#include <exception>
#include <mutex>

#include "dnl/kernels.hpp"

namespace dnl::omp {
namespace {

// Exceptions must not escape an OpenMP region; keep the first and rethrow.
class FirstError {
 public:
  template <class F>
  void Run(F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void Rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

std::vector<TransitionProfile> ExtractProfiles(const Batch& batch,
                                               const LinearModel& model,
                                               std::size_t beta_index,
                                               const SearchSpec& spec,
                                               const Oracle& oracle,
                                               Extraction extraction) {
  const double beta_old = model.coefficient(beta_index);
  std::vector<TransitionProfile> out(batch.size());
  FirstError error;
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    error.Run([&] {
      out[i] = extraction == Extraction::kFull
                   ? ExtractFull(model, *batch[i], beta_index, spec, oracle)
                   : ExtractGreedy(model, *batch[i], beta_index, spec, oracle,
                                   beta_old);
    });
  }
  error.Rethrow();
  return out;
}

std::vector<double> EvaluateRegrets(std::span<const CoordinateLine> lines,
                                    std::span<const RegretQuery> queries,
                                    const Oracle& oracle) {
  std::vector<double> out(queries.size());
  FirstError error;
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    error.Run([&] {
      const auto& line = lines[queries[q].problem];
      out[q] = RegretOfPrediction(line.At(queries[q].beta), line.problem(),
                                  oracle)
                   .regret;
    });
  }
  error.Rethrow();
  return out;
}

std::vector<double> ModelRegrets(const LinearModel& model, const Batch& batch,
                                 const Oracle& oracle) {
  std::vector<double> out(batch.size());
  FirstError error;
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    error.Run([&] { out[i] = RegretOf(model, *batch[i], oracle).regret; });
  }
  error.Rethrow();
  return out;
}

}  // namespace dnl::omp
