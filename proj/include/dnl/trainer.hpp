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

// Coordinate-descent training on regret (DnL, DnL-MAX, DnL-Greedy).
//
// For every mini-batch and every coefficient index in ascending order the
// trainer extracts transition profiles around the current coefficient,
// selects the candidate with the lowest batch-mean regret and moves the
// coefficient toward it: beta <- beta + learning_rate * (beta_opt - beta).
// The intercept keeps its warmstart value.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dnl/core.hpp"
#include "dnl/kernels.hpp"
#include "dnl/oracle.hpp"
#include "dnl/transition.hpp"

namespace dnl {

enum class Variant { kDnl, kDnlMax, kDnlGreedy };

std::string ToString(Variant variant);
// Accepts "dnl", "dnl-max", "dnl-greedy".
std::optional<Variant> ParseVariant(const std::string& name);

struct TrainConfig {
  Variant variant = Variant::kDnl;
  int batch_size = 32;
  double learning_rate = 0.1;
  int max_epochs = 30;
  double max_seconds = 120.0;
  int early_stop_patience = 5;  // 0 disables early stopping
  std::uint64_t rng_seed = 0;
  Execution execution = Execution::kParallel;

  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 0 is the warmstart model before any update
  double train_regret = 0.0;
  double val_regret = 0.0;
  double seconds = 0.0;             // cumulative wall time
  std::uint64_t oracle_calls = 0;   // cumulative solver invocations
};

struct TrainTrace {
  std::vector<EpochRecord> epochs;
  LinearModel best_model;
  LinearModel final_model;
  int best_epoch = 0;
  bool truncated = false;  // wall-clock limit reached
  std::uint64_t oracle_calls = 0;
};

// Midpoints of the pieces delimited by the profile's transition intervals and
// region endpoints, plus `beta_old`. A greedy profile with an improving point
// contributes that point instead of piece midpoints. Sorted, unique.
std::vector<double> CandidateBetas(const TransitionProfile& profile,
                                   double beta_old);
std::vector<double> CandidateBetas(std::span<const TransitionProfile> profiles,
                                   double beta_old);

struct Selection {
  double beta = 0.0;
  double mean_regret = 0.0;
  std::uint64_t evaluations = 0;  // regret evaluations, one oracle call each
};

// Among candidates whose mean regret is within tolerance of the minimum, the
// one nearest to beta_old (then the smaller) wins.
Selection SelectBetaFull(std::span<const double> candidates, const Batch& batch,
                         const LinearModel& model, std::size_t beta_index,
                         const Oracle& oracle,
                         Execution execution = Execution::kSerial);

// Each problem set first picks its own best candidate; only those winners
// (and beta_old) are compared over the whole batch. Uses at most
// sum_i |C_i| + (N - 1) * N evaluations, where C_i are the candidates of
// problem set i (beta_old included).
Selection SelectBetaMax(std::span<const TransitionProfile> profiles,
                        const Batch& batch, const LinearModel& model,
                        std::size_t beta_index, const Oracle& oracle,
                        Execution execution = Execution::kSerial);

std::uint64_t SelectBetaMaxBudget(std::span<const TransitionProfile> profiles,
                                  double beta_old);

TrainTrace Train(std::span<const ProblemSet> train,
                 std::span<const ProblemSet> validation,
                 const TrainConfig& config, const Oracle& oracle,
                 const LinearModel& warmstart);

// Columns: epoch,train_regret,val_regret,oracle_calls. All deterministic.
void WriteTraceCsv(const TrainTrace& trace, std::ostream& out);
// Columns: epoch,seconds.
void WriteTimingCsv(const TrainTrace& trace, std::ostream& out);

}  // namespace dnl
