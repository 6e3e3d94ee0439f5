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

// Regret, predicted optimal value (POV) and true optimal value (TOV).
//
// All three are expressed in the maximization convention: objectives of
// minimization families are multiplied by -1, so regret is always
// true_optimal - achieved and POV is convex in every model parameter.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dnl/core.hpp"
#include "dnl/oracle.hpp"

namespace dnl {

struct RegretValue {
  double regret = 0.0;
  double true_optimal = 0.0;  // utility of s(v) under v
  double achieved = 0.0;      // utility of s(v_p) under v
};

// Clamps values within kObjectiveTolerance of zero (or below) to zero.
double ClampRegret(double regret);

RegretValue RegretOf(const LinearModel& model, const ProblemSet& problem,
                     const Oracle& oracle);

// Regret of an arbitrary prediction vector.
RegretValue RegretOfPrediction(std::span<const double> predicted,
                               const ProblemSet& problem,
                               const Oracle& oracle);

// Objective value of s(v_p) under v_p, with parameter `beta_index` set to
// `beta_value` and every other parameter taken from the model.
double Pov(const LinearModel& model, const ProblemSet& problem,
           std::size_t beta_index, double beta_value, const Oracle& oracle);

// Objective value of s(v_p) under the true coefficients.
double Tov(const LinearModel& model, const ProblemSet& problem,
           std::size_t beta_index, double beta_value, const Oracle& oracle);

// Predictions along one coordinate: v_p(beta) = offset + beta * slope.
class CoordinateLine {
 public:
  CoordinateLine(const LinearModel& model, const ProblemSet& problem,
                 std::size_t beta_index);

  std::vector<double> At(double beta) const;
  const ProblemSet& problem() const { return *problem_; }

 private:
  const ProblemSet* problem_;
  std::vector<double> offset_;
  std::vector<double> slope_;
};

// One oracle probe along a coordinate line.
struct LineProbe {
  double beta = 0.0;
  double pov = 0.0;  // utility of the predicted solution under predictions
  double tov = 0.0;  // utility of the predicted solution under true values
};

LineProbe ProbeLine(const CoordinateLine& line, double beta,
                    const Oracle& oracle);

}  // namespace dnl
