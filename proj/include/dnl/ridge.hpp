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

// Ridge regression: the prediction-focused baseline and the warmstart for
// regret training.

#pragma once

#include <span>
#include <vector>

#include "dnl/core.hpp"
#include "dnl/oracle.hpp"

namespace dnl {

struct RidgeConfig {
  double l2_penalty = 0.0;
  bool fit_intercept = true;
};

// Minimizes sum (v - beta . theta - c)^2 + l2_penalty * |beta|^2 over every
// (feature row, true value) pair of the training problem sets. The intercept
// is not penalized. Rank-deficient systems get the minimum-norm solution.
LinearModel FitRidge(std::span<const ProblemSet> train,
                     const RidgeConfig& config = {});

inline constexpr double kRidgePenaltyGrid[] = {0.0, 0.01, 0.1, 1.0, 10.0};

// Fits every penalty of kRidgePenaltyGrid and keeps the one with the lowest
// mean validation regret (first on ties).
LinearModel FitRidgeTuned(std::span<const ProblemSet> train,
                          std::span<const ProblemSet> validation,
                          const Oracle& oracle);

struct RegretSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t count = 0;
};

RegretSummary Summarize(std::span<const double> values);

RegretSummary EvaluateModelRegret(const LinearModel& model,
                                  std::span<const ProblemSet> problems,
                                  const Oracle& oracle);

}  // namespace dnl
