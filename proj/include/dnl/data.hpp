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

// Price series ingestion and synthesis, problem-set construction for both
// families, fold splits and the line-oriented dataset cache format.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnl/core.hpp"

namespace dnl {

inline constexpr std::size_t kDefaultGroupSize = 48;

struct HiddenMap {
  std::vector<double> coefficients;
  double intercept = 0.0;
};

// Time-ordered rows of (timestamp, features, true price). Consecutive groups
// of `group_size` rows form one problem set; a trailing partial group is
// dropped on construction.
struct RawSeries {
  std::vector<std::string> timestamps;
  std::vector<std::string> feature_names;
  std::vector<double> features;  // row-major, rows() x feature_dim()
  std::vector<double> prices;
  std::size_t group_size = kDefaultGroupSize;
  std::size_t dropped_rows = 0;
  std::optional<HiddenMap> hidden;  // set by Synthesize

  std::size_t rows() const { return prices.size(); }
  std::size_t feature_dim() const { return feature_names.size(); }
  std::size_t groups() const { return rows() / group_size; }
  std::span<const double> feature_row(std::size_t r) const {
    return {features.data() + r * feature_dim(), feature_dim()};
  }
};

struct CsvSchema {
  std::string timestamp_column = "timestamp";
  std::string price_column = "price";
  // Empty: every column except timestamp and price, in file order.
  std::vector<std::string> feature_columns;
  std::size_t group_size = kDefaultGroupSize;
};

// Comma-delimited with a header row. Errors name the offending file line
// (the header is line 1). Dropped trailing rows are reported to `warnings`.
RawSeries LoadCsv(const std::string& path, const CsvSchema& schema = {},
                  std::ostream* warnings = nullptr);
RawSeries ParseCsv(std::istream& in, const CsvSchema& schema = {},
                   std::ostream* warnings = nullptr);
void WriteCsv(const RawSeries& series, std::ostream& out);

// Gaussian features, price = hidden . features + intercept + N(0, sigma^2).
RawSeries Synthesize(int num_days, int feature_dim, double noise_sigma,
                     std::uint64_t seed,
                     std::size_t group_size = kDefaultGroupSize);

// Unit mode: weights 1, values = prices. Weighted mode: weight drawn from
// {3, 5, 7} per item, value = weight * price, and the weight is appended to
// the item's features.
Dataset MakeKnapsack(const RawSeries& series, bool weighted, double capacity,
                     std::uint64_t seed);

// Prices per period become the coefficients of a shared scheduling load.
Dataset MakeScheduling(const RawSeries& series,
                       const SchedulingConstraint& load);

// Random feasible load; retries until the instance admits a schedule.
SchedulingConstraint GenerateLoad(int machines, int jobs, int periods,
                                  std::uint64_t seed);

struct SplitSpec {
  int folds = 5;
  double train_frac = 0.70;
  double val_frac = 0.10;
  double test_frac = 0.20;

  void Validate() const;
};

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Contiguous time-ordered blocks rotated per fold. With several folds, fold f
// tests on the f-th of `folds` equal blocks; with one fold the last
// test_frac of the problem sets are the test split. The validation split is
// the round(val_frac * n) sets preceding the test block (cyclically) and the
// remainder trains.
std::vector<FoldSplit> Split(std::size_t problem_count, const SplitSpec& spec);

std::vector<ProblemSet> Subset(std::span<const ProblemSet> problems,
                               std::span<const std::size_t> indices);

void WriteDataset(const Dataset& dataset, std::ostream& out);
Dataset ReadDataset(std::istream& in);

}  // namespace dnl
