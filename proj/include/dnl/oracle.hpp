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

// Exact solvers s(v) for the supported problem families.
//
// Every solver optimizes in the natural sense of its family: knapsack
// maximizes x . v, scheduling minimizes x . prices. The `objective` of an
// OracleResult is always reported in those natural units.

#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>

#include "dnl/core.hpp"

namespace dnl {

struct OracleResult {
  Solution solution;
  double objective = 0.0;
};

// 0-1 knapsack by dynamic programming over integerized weights. Weights and
// capacity are scaled by the smallest power of ten (at most 1e6) that makes
// every weight integral.
OracleResult SolveKnapsackDp(std::span<const double> values,
                             const KnapsackConstraint& constraint);

// 0-1 knapsack by depth-first branch-and-bound with the LP-relaxation bound.
// Accepts real-valued weights.
OracleResult SolveKnapsackBranchAndBound(std::span<const double> values,
                                         const KnapsackConstraint& constraint);

// Minimum energy-cost schedule by depth-first branch-and-bound.
OracleResult SolveScheduling(std::span<const double> prices,
                             const SchedulingConstraint& constraint);

// Exhaustive enumeration; test reference only.
inline constexpr std::size_t kBruteForceMaxItems = 22;
inline constexpr double kBruteForceMaxSchedules = 1e7;
OracleResult SolveBruteForce(std::span<const double> values,
                             const ConstraintData& constraint);

enum class KnapsackMethod { kDynamicProgramming, kBranchAndBound, kBruteForce };

// Instrumented, thread-safe front end over the solvers. Counts every solver
// invocation and memoizes the true optimum of each problem set.
class Oracle {
 public:
  explicit Oracle(KnapsackMethod knapsack = KnapsackMethod::kDynamicProgramming)
      : knapsack_(knapsack) {}

  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  OracleResult Solve(std::span<const double> values,
                     const ConstraintData& constraint) const;

  // Obj(x*, v) in the maximization convention (sign applied), computed once
  // per problem-set id.
  double TrueOptimalUtility(const ProblemSet& problem) const;

  std::uint64_t calls() const { return calls_.load(); }
  void ResetCalls() { calls_.store(0); }

 private:
  struct MemoEntry {
    std::once_flag once;
    double utility = 0.0;
  };

  KnapsackMethod knapsack_;
  mutable std::atomic<std::uint64_t> calls_{0};
  mutable std::mutex memo_mutex_;
  mutable std::map<std::string, std::unique_ptr<MemoEntry>> memo_;
};

}  // namespace dnl
