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

#include "dnl/ridge.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "dnl/regret.hpp"

namespace dnl {

LinearModel FitRidge(std::span<const ProblemSet> train,
                     const RidgeConfig& config) {
  if (!(config.l2_penalty >= 0.0)) {
    throw InputError("ridge penalty must be nonnegative");
  }
  if (train.empty()) throw InputError("ridge needs training data");
  const std::size_t p = train.front().feature_dim();
  std::size_t rows = 0;
  for (const auto& problem : train) {
    if (problem.feature_dim() != p) {
      throw InputError("training problem sets differ in feature dimension");
    }
    rows += problem.size();
  }
  const std::size_t cols = p + (config.fit_intercept ? 1 : 0);
  if (rows < cols) {
    throw InputError("ridge needs at least p + 1 training rows");
  }

  // Augmented least squares: [X 1; sqrt(l2) [I 0]] w ~ [y; 0].
  const bool penalized = config.l2_penalty > 0.0;
  const auto total_rows = static_cast<Eigen::Index>(rows + (penalized ? p : 0));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(total_rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(total_rows);
  Eigen::Index r = 0;
  for (const auto& problem : train) {
    for (std::size_t i = 0; i < problem.size(); ++i, ++r) {
      for (std::size_t k = 0; k < p; ++k) a(r, k) = problem.feature(i, k);
      if (config.fit_intercept) a(r, p) = 1.0;
      b(r) = problem.true_values()[i];
    }
  }
  if (penalized) {
    const double root = std::sqrt(config.l2_penalty);
    for (std::size_t k = 0; k < p; ++k, ++r) a(r, k) = root;
  }

  const Eigen::VectorXd w = a.completeOrthogonalDecomposition().solve(b);
  std::vector<double> beta(w.data(), w.data() + p);
  return LinearModel(std::move(beta), config.fit_intercept ? w(p) : 0.0);
}

RegretSummary Summarize(std::span<const double> values) {
  RegretSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

RegretSummary EvaluateModelRegret(const LinearModel& model,
                                  std::span<const ProblemSet> problems,
                                  const Oracle& oracle) {
  std::vector<double> regrets;
  regrets.reserve(problems.size());
  for (const auto& problem : problems) {
    regrets.push_back(RegretOf(model, problem, oracle).regret);
  }
  return Summarize(regrets);
}

LinearModel FitRidgeTuned(std::span<const ProblemSet> train,
                          std::span<const ProblemSet> validation,
                          const Oracle& oracle) {
  const auto& scored = validation.empty() ? train : validation;
  LinearModel best;
  double best_regret = 0.0;
  bool first = true;
  for (double penalty : kRidgePenaltyGrid) {
    LinearModel model = FitRidge(train, {penalty, true});
    const double regret = EvaluateModelRegret(model, scored, oracle).mean;
    if (first || regret < best_regret) {
      best = std::move(model);
      best_regret = regret;
      first = false;
    }
  }
  return best;
}

}  // namespace dnl
