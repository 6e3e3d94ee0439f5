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

// Domain types shared by every module: problem sets, linear prediction
// models and solutions of the two supported problem families.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dnl {

// Absolute tolerance for objective comparisons across the library.
inline constexpr double kObjectiveTolerance = 1e-9;

// Raised for malformed or inconsistent input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an oracle cannot produce a solution (infeasible or too large).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sense { kMaximize, kMinimize };

// +1 for maximization, -1 for minimization. Multiplying an objective by the
// sign maps it into the maximization convention used by all shared code.
inline double SenseSign(Sense sense) {
  return sense == Sense::kMaximize ? 1.0 : -1.0;
}

struct KnapsackConstraint {
  std::vector<double> weights;
  double capacity = 0.0;
};

struct MachineSpec {
  double capacity = 0.0;
};

struct JobSpec {
  double resource = 0.0;
  double power = 0.0;
  int duration = 1;
  int earliest_start = 0;
  int latest_finish = 0;  // exclusive: the job must end at or before this period
};

struct SchedulingConstraint {
  std::vector<MachineSpec> machines;
  std::vector<JobSpec> jobs;
  int periods = 0;
};

using ConstraintData = std::variant<KnapsackConstraint, SchedulingConstraint>;

// Number of objective coefficients implied by the constraint.
std::size_t CoefficientCount(const ConstraintData& constraint);
Sense SenseOf(const ConstraintData& constraint);
bool IsKnapsack(const ConstraintData& constraint);

// Throws InputError when the constraint violates its invariants.
void ValidateConstraint(const ConstraintData& constraint);

// One optimization instance: true coefficients, one feature row per
// coefficient and the (possibly shared) constraint data.
class ProblemSet {
 public:
  ProblemSet(std::string id, std::vector<double> true_values,
             std::vector<double> features, std::size_t feature_dim,
             std::shared_ptr<const ConstraintData> constraint);

  const std::string& id() const { return id_; }
  std::span<const double> true_values() const { return true_values_; }
  std::size_t size() const { return true_values_.size(); }
  std::size_t feature_dim() const { return feature_dim_; }
  std::span<const double> feature_row(std::size_t i) const {
    return {features_.data() + i * feature_dim_, feature_dim_};
  }
  double feature(std::size_t i, std::size_t k) const {
    return features_[i * feature_dim_ + k];
  }
  std::span<const double> features() const { return features_; }
  const ConstraintData& constraint() const { return *constraint_; }
  const std::shared_ptr<const ConstraintData>& shared_constraint() const {
    return constraint_;
  }
  Sense sense() const { return SenseOf(*constraint_); }

 private:
  std::string id_;
  std::vector<double> true_values_;
  std::vector<double> features_;  // row-major, size() x feature_dim
  std::size_t feature_dim_;
  std::shared_ptr<const ConstraintData> constraint_;
};

// v = coefficients . theta + intercept
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(std::vector<double> coefficients, double intercept);

  std::span<const double> coefficients() const { return coefficients_; }
  double coefficient(std::size_t k) const { return coefficients_[k]; }
  double intercept() const { return intercept_; }
  std::size_t dim() const { return coefficients_.size(); }

  LinearModel WithCoefficient(std::size_t k, double value) const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::vector<double> coefficients_;
  double intercept_ = 0.0;
};

struct Dataset {
  std::vector<ProblemSet> problem_sets;
  std::size_t feature_dim = 0;
};

// Throws InputError unless every problem set shares feature_dim and family.
void ValidateDataset(const Dataset& dataset);

struct JobPlacement {
  int machine = 0;
  int start = 0;
};

// A solution keeps its family-specific assignment together with the expanded
// decision vector x, so that Obj(x, v) = x . v for both families. For
// scheduling, x[t] is the total power drawn in period t.
class Solution {
 public:
  static Solution Knapsack(std::vector<unsigned char> take);
  static Solution Schedule(std::vector<JobPlacement> placements,
                           const SchedulingConstraint& constraint);

  std::span<const double> decision() const { return decision_; }
  Sense sense() const { return sense_; }
  const std::vector<unsigned char>* take() const {
    return std::get_if<std::vector<unsigned char>>(&assignment_);
  }
  const std::vector<JobPlacement>* placements() const {
    return std::get_if<std::vector<JobPlacement>>(&assignment_);
  }

 private:
  std::variant<std::vector<unsigned char>, std::vector<JobPlacement>>
      assignment_;
  std::vector<double> decision_;
  Sense sense_ = Sense::kMaximize;
};

// Predicted coefficient per row of the problem's feature matrix.
std::vector<double> Predict(const LinearModel& model,
                            const ProblemSet& problem);

// x^T . values
double SolutionObjective(const Solution& solution,
                         std::span<const double> values);

// Returns a description of the first violated constraint, or nullopt.
std::optional<std::string> FeasibilityViolation(
    const Solution& solution, const ConstraintData& constraint);

inline bool IsFeasible(const Solution& solution,
                       const ConstraintData& constraint) {
  return !FeasibilityViolation(solution, constraint).has_value();
}

}  // namespace dnl
