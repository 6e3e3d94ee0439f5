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

#include "dnl/regret.hpp"

namespace dnl {

double ClampRegret(double regret) {
  return regret <= kObjectiveTolerance ? 0.0 : regret;
}

RegretValue RegretOfPrediction(std::span<const double> predicted,
                               const ProblemSet& problem,
                               const Oracle& oracle) {
  const double sign = SenseSign(problem.sense());
  RegretValue out;
  out.true_optimal = oracle.TrueOptimalUtility(problem);
  const auto chosen = oracle.Solve(predicted, problem.constraint());
  out.achieved = sign * SolutionObjective(chosen.solution, problem.true_values());
  out.regret = ClampRegret(out.true_optimal - out.achieved);
  return out;
}

RegretValue RegretOf(const LinearModel& model, const ProblemSet& problem,
                     const Oracle& oracle) {
  return RegretOfPrediction(Predict(model, problem), problem, oracle);
}

CoordinateLine::CoordinateLine(const LinearModel& model,
                               const ProblemSet& problem,
                               std::size_t beta_index)
    : problem_(&problem) {
  if (beta_index >= model.dim()) {
    throw InputError("parameter index out of range");
  }
  offset_ = Predict(model.WithCoefficient(beta_index, 0.0), problem);
  slope_.resize(problem.size());
  for (std::size_t i = 0; i < slope_.size(); ++i) {
    slope_[i] = problem.feature(i, beta_index);
  }
}

std::vector<double> CoordinateLine::At(double beta) const {
  std::vector<double> out(offset_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = offset_[i] + beta * slope_[i];
  }
  return out;
}

LineProbe ProbeLine(const CoordinateLine& line, double beta,
                    const Oracle& oracle) {
  const auto& problem = line.problem();
  const double sign = SenseSign(problem.sense());
  const auto predicted = line.At(beta);
  const auto result = oracle.Solve(predicted, problem.constraint());
  return {beta, sign * result.objective,
          sign * SolutionObjective(result.solution, problem.true_values())};
}

double Pov(const LinearModel& model, const ProblemSet& problem,
           std::size_t beta_index, double beta_value, const Oracle& oracle) {
  return ProbeLine(CoordinateLine(model, problem, beta_index), beta_value,
                   oracle)
      .pov;
}

double Tov(const LinearModel& model, const ProblemSet& problem,
           std::size_t beta_index, double beta_value, const Oracle& oracle) {
  return ProbeLine(CoordinateLine(model, problem, beta_index), beta_value,
                   oracle)
      .tov;
}

}  // namespace dnl
