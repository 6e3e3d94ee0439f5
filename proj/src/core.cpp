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

#include "dnl/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dnl {

std::size_t CoefficientCount(const ConstraintData& constraint) {
  if (const auto* k = std::get_if<KnapsackConstraint>(&constraint)) {
    return k->weights.size();
  }
  return static_cast<std::size_t>(
      std::get<SchedulingConstraint>(constraint).periods);
}

Sense SenseOf(const ConstraintData& constraint) {
  return IsKnapsack(constraint) ? Sense::kMaximize : Sense::kMinimize;
}

bool IsKnapsack(const ConstraintData& constraint) {
  return std::holds_alternative<KnapsackConstraint>(constraint);
}

void ValidateConstraint(const ConstraintData& constraint) {
  if (const auto* k = std::get_if<KnapsackConstraint>(&constraint)) {
    if (!(k->capacity >= 0.0) || !std::isfinite(k->capacity)) {
      throw InputError("knapsack capacity must be finite and nonnegative");
    }
    for (double w : k->weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InputError("knapsack weights must be finite and nonnegative");
      }
    }
    return;
  }
  const auto& s = std::get<SchedulingConstraint>(constraint);
  if (s.periods <= 0) throw InputError("scheduling horizon must be positive");
  if (s.machines.empty()) throw InputError("scheduling needs a machine");
  double max_capacity = 0.0;
  for (const auto& m : s.machines) {
    if (!(m.capacity >= 0.0)) {
      throw InputError("machine capacity must be nonnegative");
    }
    max_capacity = std::max(max_capacity, m.capacity);
  }
  for (std::size_t j = 0; j < s.jobs.size(); ++j) {
    const auto& job = s.jobs[j];
    std::ostringstream where;
    where << "job " << j << ": ";
    if (job.duration <= 0 || job.duration > s.periods) {
      throw InputError(where.str() + "duration must lie in [1, periods]");
    }
    if (job.earliest_start < 0 || job.latest_finish > s.periods ||
        job.earliest_start + job.duration > job.latest_finish) {
      throw InputError(where.str() + "time window cannot hold the job");
    }
    if (!(job.resource >= 0.0) || !(job.power >= 0.0)) {
      throw InputError(where.str() + "resource and power must be nonnegative");
    }
    if (job.resource > max_capacity) {
      throw InputError(where.str() + "resource exceeds every machine");
    }
  }
}

ProblemSet::ProblemSet(std::string id, std::vector<double> true_values,
                       std::vector<double> features, std::size_t feature_dim,
                       std::shared_ptr<const ConstraintData> constraint)
    : id_(std::move(id)),
      true_values_(std::move(true_values)),
      features_(std::move(features)),
      feature_dim_(feature_dim),
      constraint_(std::move(constraint)) {
  if (!constraint_) throw InputError("problem set without constraint data");
  if (features_.size() != true_values_.size() * feature_dim_) {
    throw InputError("problem set " + id_ +
                     ": feature rows do not match coefficient count");
  }
  if (CoefficientCount(*constraint_) != true_values_.size()) {
    throw InputError("problem set " + id_ +
                     ": constraint size does not match coefficient count");
  }
  ValidateConstraint(*constraint_);
}

LinearModel::LinearModel(std::vector<double> coefficients, double intercept)
    : coefficients_(std::move(coefficients)), intercept_(intercept) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(coefficients_.begin(), coefficients_.end(), finite) ||
      !std::isfinite(intercept_)) {
    throw InputError("model parameters must be finite");
  }
}

LinearModel LinearModel::WithCoefficient(std::size_t k, double value) const {
  auto coefficients = coefficients_;
  coefficients.at(k) = value;
  return LinearModel(std::move(coefficients), intercept_);
}

void ValidateDataset(const Dataset& dataset) {
  if (dataset.problem_sets.empty()) return;
  const bool knapsack = IsKnapsack(dataset.problem_sets.front().constraint());
  for (const auto& problem : dataset.problem_sets) {
    if (problem.feature_dim() != dataset.feature_dim) {
      throw InputError("problem set " + problem.id() +
                       ": feature dimension differs from dataset");
    }
    if (IsKnapsack(problem.constraint()) != knapsack) {
      throw InputError("dataset mixes constraint families");
    }
  }
}

Solution Solution::Knapsack(std::vector<unsigned char> take) {
  Solution s;
  s.decision_.assign(take.begin(), take.end());
  s.assignment_ = std::move(take);
  s.sense_ = Sense::kMaximize;
  return s;
}

Solution Solution::Schedule(std::vector<JobPlacement> placements,
                            const SchedulingConstraint& constraint) {
  if (placements.size() != constraint.jobs.size()) {
    throw InputError("schedule must place every job exactly once");
  }
  Solution s;
  s.decision_.assign(static_cast<std::size_t>(constraint.periods), 0.0);
  for (std::size_t j = 0; j < placements.size(); ++j) {
    const auto& job = constraint.jobs[j];
    for (int t = placements[j].start; t < placements[j].start + job.duration;
         ++t) {
      if (t >= 0 && t < constraint.periods) s.decision_[t] += job.power;
    }
  }
  s.assignment_ = std::move(placements);
  s.sense_ = Sense::kMinimize;
  return s;
}

std::vector<double> Predict(const LinearModel& model,
                            const ProblemSet& problem) {
  if (model.dim() != problem.feature_dim()) {
    throw InputError("model dimension " + std::to_string(model.dim()) +
                     " does not match feature dimension " +
                     std::to_string(problem.feature_dim()));
  }
  std::vector<double> out(problem.size());
  const auto beta = model.coefficients();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto row = problem.feature_row(i);
    out[i] = std::inner_product(row.begin(), row.end(), beta.begin(),
                                model.intercept());
  }
  return out;
}

double SolutionObjective(const Solution& solution,
                         std::span<const double> values) {
  const auto x = solution.decision();
  if (x.size() != values.size()) {
    throw InputError("solution and coefficient vectors differ in length");
  }
  return std::inner_product(x.begin(), x.end(), values.begin(), 0.0);
}

std::optional<std::string> FeasibilityViolation(
    const Solution& solution, const ConstraintData& constraint) {
  if (const auto* k = std::get_if<KnapsackConstraint>(&constraint)) {
    const auto* take = solution.take();
    if (take == nullptr) return "expected a knapsack assignment";
    if (take->size() != k->weights.size()) return "wrong assignment length";
    double load = 0.0;
    for (std::size_t i = 0; i < take->size(); ++i) {
      if ((*take)[i] > 1) return "assignment is not 0-1";
      if ((*take)[i]) load += k->weights[i];
    }
    if (load > k->capacity + kObjectiveTolerance) return "capacity exceeded";
    return std::nullopt;
  }
  const auto& s = std::get<SchedulingConstraint>(constraint);
  const auto* placements = solution.placements();
  if (placements == nullptr) return "expected a schedule";
  if (placements->size() != s.jobs.size()) return "wrong number of jobs";
  std::vector<double> usage(s.machines.size() * s.periods, 0.0);
  for (std::size_t j = 0; j < s.jobs.size(); ++j) {
    const auto& job = s.jobs[j];
    const auto& p = (*placements)[j];
    if (p.machine < 0 || p.machine >= static_cast<int>(s.machines.size())) {
      return "job " + std::to_string(j) + " on unknown machine";
    }
    if (p.start < job.earliest_start ||
        p.start + job.duration > job.latest_finish) {
      return "job " + std::to_string(j) + " outside its time window";
    }
    for (int t = p.start; t < p.start + job.duration; ++t) {
      usage[p.machine * s.periods + t] += job.resource;
    }
  }
  for (std::size_t m = 0; m < s.machines.size(); ++m) {
    for (int t = 0; t < s.periods; ++t) {
      if (usage[m * s.periods + t] >
          s.machines[m].capacity + kObjectiveTolerance) {
        return "machine " + std::to_string(m) + " overloaded in period " +
               std::to_string(t);
      }
    }
  }
  return std::nullopt;
}

}  // namespace dnl
