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

#include "dnl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace dnl {
namespace {

constexpr std::int64_t kMaxDpCapacity = 50'000'000;
constexpr std::uint64_t kMaxSchedulingNodes = 200'000'000;

void CheckLength(std::span<const double> values, std::size_t expected) {
  if (values.size() != expected) {
    throw InputError("coefficient vector has length " +
                     std::to_string(values.size()) + ", expected " +
                     std::to_string(expected));
  }
}

OracleResult MakeResult(Solution solution, std::span<const double> values) {
  const double objective = SolutionObjective(solution, values);
  return {std::move(solution), objective};
}

// Smallest power of ten that turns every weight into an integer.
std::int64_t WeightScale(const KnapsackConstraint& constraint) {
  std::int64_t scale = 1;
  for (int s = 0; s <= 6; ++s, scale *= 10) {
    const bool integral =
        std::all_of(constraint.weights.begin(), constraint.weights.end(),
                    [scale](double w) {
                      const double scaled = w * static_cast<double>(scale);
                      return std::abs(scaled - std::round(scaled)) <=
                             1e-9 * std::max(1.0, std::abs(scaled));
                    });
    if (integral) return scale;
  }
  throw InputError(
      "knapsack weights cannot be integerized with at most 6 decimals");
}

}  // namespace

OracleResult SolveKnapsackDp(std::span<const double> values,
                             const KnapsackConstraint& constraint) {
  CheckLength(values, constraint.weights.size());
  const std::int64_t scale = WeightScale(constraint);
  const auto n = values.size();
  const auto capacity = static_cast<std::int64_t>(
      std::floor(constraint.capacity * static_cast<double>(scale) + 1e-9));
  if (capacity > kMaxDpCapacity) {
    throw SolverError("knapsack capacity too large for the DP table");
  }
  std::vector<std::int64_t> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::llround(constraint.weights[i] * static_cast<double>(scale));
  }

  const auto width = static_cast<std::size_t>(capacity) + 1;
  std::vector<double> best(width, 0.0);
  std::vector<unsigned char> keep(n * width, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0) || weights[i] > capacity) continue;
    const auto w = static_cast<std::size_t>(weights[i]);
    unsigned char* keep_row = keep.data() + i * width;
    for (std::size_t c = width; c-- > w;) {
      const double with = best[c - w] + values[i];
      if (with > best[c]) {
        best[c] = with;
        keep_row[c] = 1;
      }
    }
  }

  std::vector<unsigned char> take(n, 0);
  std::size_t c = width - 1;
  for (std::size_t i = n; i-- > 0;) {
    if (keep[i * width + c]) {
      take[i] = 1;
      c -= static_cast<std::size_t>(weights[i]);
    }
  }
  return MakeResult(Solution::Knapsack(std::move(take)), values);
}

namespace {

class KnapsackSearch {
 public:
  KnapsackSearch(std::span<const double> values,
                 const KnapsackConstraint& constraint)
      : values_(values), weights_(constraint.weights) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0) || weights_[i] > constraint.capacity) continue;
      if (weights_[i] == 0.0) {
        forced_.push_back(i);
      } else {
        order_.push_back(i);
      }
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return values_[a] * weights_[b] >
                              values_[b] * weights_[a];
                     });
    capacity_ = constraint.capacity;
  }

  std::vector<unsigned char> Run() {
    std::vector<unsigned char> take(values_.size(), 0);
    current_.assign(order_.size(), 0);
    best_.assign(order_.size(), 0);
    best_value_ = 0.0;
    Visit(0, capacity_, 0.0);
    for (std::size_t i : forced_) take[i] = 1;
    for (std::size_t j = 0; j < order_.size(); ++j) {
      if (best_[j]) take[order_[j]] = 1;
    }
    return take;
  }

 private:
  // Fractional knapsack over order_[depth..]; an upper bound on the gain.
  double Bound(std::size_t depth, double room) const {
    double gain = 0.0;
    for (std::size_t j = depth; j < order_.size(); ++j) {
      const std::size_t i = order_[j];
      if (weights_[i] <= room) {
        room -= weights_[i];
        gain += values_[i];
      } else {
        gain += values_[i] * room / weights_[i];
        break;
      }
    }
    return gain;
  }

  void Visit(std::size_t depth, double room, double value) {
    if (value > best_value_) {
      best_value_ = value;
      best_ = current_;
    }
    if (depth == order_.size()) return;
    if (value + Bound(depth, room) <= best_value_) return;
    const std::size_t i = order_[depth];
    if (weights_[i] <= room) {
      current_[depth] = 1;
      Visit(depth + 1, room - weights_[i], value + values_[i]);
      current_[depth] = 0;
    }
    Visit(depth + 1, room, value);
  }

  std::span<const double> values_;
  const std::vector<double>& weights_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> forced_;
  double capacity_ = 0.0;
  std::vector<unsigned char> current_;
  std::vector<unsigned char> best_;
  double best_value_ = 0.0;
};

}  // namespace

OracleResult SolveKnapsackBranchAndBound(std::span<const double> values,
                                         const KnapsackConstraint& constraint) {
  CheckLength(values, constraint.weights.size());
  KnapsackSearch search(values, constraint);
  return MakeResult(Solution::Knapsack(search.Run()), values);
}

namespace {

struct Option {
  int machine;
  int start;
  double cost;
};

class ScheduleSearch {
 public:
  ScheduleSearch(std::span<const double> prices,
                 const SchedulingConstraint& constraint)
      : constraint_(constraint), periods_(constraint.periods) {
    std::vector<double> prefix(periods_ + 1, 0.0);
    for (int t = 0; t < periods_; ++t) prefix[t + 1] = prefix[t] + prices[t];

    const auto jobs = constraint.jobs.size();
    order_.resize(jobs);
    std::iota(order_.begin(), order_.end(), 0);
    auto slack = [&](std::size_t j) {
      const auto& job = constraint.jobs[j];
      return job.latest_finish - job.earliest_start - job.duration;
    };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return slack(a) < slack(b);
                     });

    options_.resize(jobs);
    lower_bound_suffix_.assign(jobs + 1, 0.0);
    std::vector<double> cheapest(jobs, 0.0);
    for (std::size_t d = 0; d < jobs; ++d) {
      const auto& job = constraint.jobs[order_[d]];
      auto& opts = options_[d];
      for (int m = 0; m < static_cast<int>(constraint.machines.size()); ++m) {
        if (job.resource > constraint.machines[m].capacity) continue;
        for (int s = job.earliest_start; s + job.duration <= job.latest_finish;
             ++s) {
          const double cost =
              job.power * (prefix[s + job.duration] - prefix[s]);
          opts.push_back({m, s, cost});
        }
      }
      if (opts.empty()) throw SolverError("a job fits no machine");
      std::stable_sort(opts.begin(), opts.end(),
                       [](const Option& a, const Option& b) {
                         return a.cost < b.cost;
                       });
      cheapest[d] = opts.front().cost;
    }
    for (std::size_t d = jobs; d-- > 0;) {
      lower_bound_suffix_[d] = lower_bound_suffix_[d + 1] + cheapest[d];
    }
  }

  std::vector<JobPlacement> Run() {
    usage_.assign(constraint_.machines.size() * periods_, 0.0);
    current_.assign(constraint_.jobs.size(), {});
    best_cost_ = std::numeric_limits<double>::infinity();
    found_ = false;
    Visit(0, 0.0);
    if (!found_) throw SolverError("scheduling instance is infeasible");
    return best_;
  }

 private:
  bool Fits(const JobSpec& job, int machine, int start) const {
    const double* row = usage_.data() + machine * periods_;
    const double cap = constraint_.machines[machine].capacity;
    for (int t = start; t < start + job.duration; ++t) {
      if (row[t] + job.resource > cap + kObjectiveTolerance) return false;
    }
    return true;
  }

  // Machine m is interchangeable with an earlier machine that has the same
  // capacity and the same load profile.
  bool Redundant(int machine) const {
    const double cap = constraint_.machines[machine].capacity;
    const double* row = usage_.data() + machine * periods_;
    for (int other = 0; other < machine; ++other) {
      if (constraint_.machines[other].capacity != cap) continue;
      const double* other_row = usage_.data() + other * periods_;
      if (std::equal(row, row + periods_, other_row)) return true;
    }
    return false;
  }

  void Place(const JobSpec& job, int machine, int start, double sign) {
    double* row = usage_.data() + machine * periods_;
    for (int t = start; t < start + job.duration; ++t) {
      row[t] += sign * job.resource;
    }
  }

  void Visit(std::size_t depth, double cost) {
    if (++nodes_ > kMaxSchedulingNodes) {
      throw SolverError("scheduling search exceeded its node budget");
    }
    if (depth == order_.size()) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = current_;
        found_ = true;
      }
      return;
    }
    const auto& job = constraint_.jobs[order_[depth]];
    std::vector<unsigned char> redundant(constraint_.machines.size(), 0);
    for (int m = 0; m < static_cast<int>(redundant.size()); ++m) {
      redundant[m] = Redundant(m);
    }
    for (const Option& option : options_[depth]) {
      if (cost + option.cost + lower_bound_suffix_[depth + 1] >= best_cost_) {
        break;
      }
      if (redundant[option.machine]) continue;
      if (!Fits(job, option.machine, option.start)) continue;
      Place(job, option.machine, option.start, 1.0);
      current_[order_[depth]] = {option.machine, option.start};
      Visit(depth + 1, cost + option.cost);
      Place(job, option.machine, option.start, -1.0);
    }
  }

  const SchedulingConstraint& constraint_;
  int periods_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Option>> options_;
  std::vector<double> lower_bound_suffix_;
  std::vector<double> usage_;
  std::vector<JobPlacement> current_;
  std::vector<JobPlacement> best_;
  double best_cost_ = 0.0;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

OracleResult BruteForceKnapsack(std::span<const double> values,
                                const KnapsackConstraint& constraint) {
  const auto n = values.size();
  if (n > kBruteForceMaxItems) {
    throw SolverError("instance too large for brute-force enumeration");
  }
  std::uint32_t best_mask = 0;
  double best_value = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double weight = 0.0;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        weight += constraint.weights[i];
        value += values[i];
      }
    }
    if (weight <= constraint.capacity + kObjectiveTolerance &&
        value > best_value) {
      best_value = value;
      best_mask = mask;
    }
  }
  std::vector<unsigned char> take(n, 0);
  for (std::size_t i = 0; i < n; ++i) take[i] = (best_mask >> i) & 1u;
  return MakeResult(Solution::Knapsack(std::move(take)), values);
}

OracleResult BruteForceScheduling(std::span<const double> prices,
                                  const SchedulingConstraint& constraint) {
  const auto jobs = constraint.jobs.size();
  std::vector<std::vector<JobPlacement>> options(jobs);
  double total = 1.0;
  for (std::size_t j = 0; j < jobs; ++j) {
    const auto& job = constraint.jobs[j];
    for (int m = 0; m < static_cast<int>(constraint.machines.size()); ++m) {
      for (int s = job.earliest_start; s + job.duration <= job.latest_finish;
           ++s) {
        options[j].push_back({m, s});
      }
    }
    total *= static_cast<double>(options[j].size());
  }
  if (total > kBruteForceMaxSchedules) {
    throw SolverError("instance too large for brute-force enumeration");
  }

  std::vector<std::size_t> digit(jobs, 0);
  std::vector<JobPlacement> current(jobs);
  std::optional<Solution> best;
  double best_cost = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t j = 0; j < jobs; ++j) current[j] = options[j][digit[j]];
    Solution candidate = Solution::Schedule(current, constraint);
    if (IsFeasible(candidate, constraint)) {
      const double cost = SolutionObjective(candidate, prices);
      if (cost < best_cost) {
        best_cost = cost;
        best = std::move(candidate);
      }
    }
    std::size_t j = 0;
    while (j < jobs && ++digit[j] == options[j].size()) digit[j++] = 0;
    if (j == jobs) break;
  }
  if (!best) throw SolverError("scheduling instance is infeasible");
  return MakeResult(std::move(*best), prices);
}

}  // namespace

OracleResult SolveScheduling(std::span<const double> prices,
                             const SchedulingConstraint& constraint) {
  CheckLength(prices, static_cast<std::size_t>(constraint.periods));
  ValidateConstraint(constraint);
  ScheduleSearch search(prices, constraint);
  return MakeResult(Solution::Schedule(search.Run(), constraint), prices);
}

OracleResult SolveBruteForce(std::span<const double> values,
                             const ConstraintData& constraint) {
  CheckLength(values, CoefficientCount(constraint));
  if (const auto* k = std::get_if<KnapsackConstraint>(&constraint)) {
    return BruteForceKnapsack(values, *k);
  }
  return BruteForceScheduling(values, std::get<SchedulingConstraint>(constraint));
}

OracleResult Oracle::Solve(std::span<const double> values,
                           const ConstraintData& constraint) const {
  calls_.fetch_add(1, std::memory_order_relaxed);
  if (knapsack_ == KnapsackMethod::kBruteForce) {
    return SolveBruteForce(values, constraint);
  }
  if (const auto* k = std::get_if<KnapsackConstraint>(&constraint)) {
    return knapsack_ == KnapsackMethod::kDynamicProgramming
               ? SolveKnapsackDp(values, *k)
               : SolveKnapsackBranchAndBound(values, *k);
  }
  return SolveScheduling(values, std::get<SchedulingConstraint>(constraint));
}

double Oracle::TrueOptimalUtility(const ProblemSet& problem) const {
  MemoEntry* entry = nullptr;
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto& slot = memo_[problem.id()];
    if (!slot) slot = std::make_unique<MemoEntry>();
    entry = slot.get();
  }
  std::call_once(entry->once, [&] {
    entry->utility = SenseSign(problem.sense()) *
                     Solve(problem.true_values(), problem.constraint()).objective;
  });
  return entry->utility;
}

}  // namespace dnl
