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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dnl/data.hpp"
#include "dnl/oracle.hpp"
#include "dnl/ridge.hpp"

using namespace dnl;

namespace {

std::string CsvRows(int rows, int bad_line = -1) {
  std::ostringstream out;
  out << "timestamp,load,temp,price\n";
  for (int r = 0; r < rows; ++r) {
    out << "t" << r << ',' << r * 0.5 << ',' << 20 - r * 0.1 << ',';
    // The header is line 1, so row r sits on line r + 2.
    if (r + 2 == bad_line) {
      out << "n/a\n";
    } else {
      out << 30 + r << '\n';
    }
  }
  return out.str();
}

}  // namespace

TEST_CASE("CSV rows group into problem sets") {
  std::istringstream in(CsvRows(96));
  std::ostringstream warnings;
  const auto series = ParseCsv(in, {}, &warnings);
  CHECK(series.groups() == 2);
  CHECK(series.rows() == 96);
  CHECK(series.dropped_rows == 0);
  CHECK(warnings.str().empty());
  CHECK(series.feature_names == std::vector<std::string>{"load", "temp"});
  CHECK(series.feature_row(3)[0] == 1.5);
  CHECK(series.prices[3] == 33.0);
  CHECK(series.timestamps[3] == "t3");
}

TEST_CASE("trailing partial group is dropped with a warning") {
  std::istringstream in(CsvRows(100));
  std::ostringstream warnings;
  const auto series = ParseCsv(in, {}, &warnings);
  CHECK(series.groups() == 2);
  CHECK(series.rows() == 96);
  CHECK(series.dropped_rows == 4);
  CHECK(warnings.str().find("dropped 4") != std::string::npos);
}

TEST_CASE("CSV errors name the offending line") {
  std::istringstream bad(CsvRows(10, 7));
  try {
    ParseCsv(bad);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(ParseCsv(empty), InputError);
  std::istringstream header_only("timestamp,x,price\n");
  CHECK_THROWS_AS(ParseCsv(header_only), InputError);
  std::istringstream no_price("timestamp,x\nt0,1\n");
  CHECK_THROWS_AS(ParseCsv(no_price), InputError);
  std::istringstream ragged("timestamp,x,price\nt0,1\n");
  CHECK_THROWS_AS(ParseCsv(ragged), InputError);
  CsvSchema schema;
  schema.feature_columns = {"missing"};
  std::istringstream in(CsvRows(48));
  CHECK_THROWS_AS(ParseCsv(in, schema), InputError);
  CHECK_THROWS_AS(LoadCsv("/nonexistent/file.csv"), InputError);
}

TEST_CASE("explicit feature columns and CSV round-trip") {
  CsvSchema schema;
  schema.feature_columns = {"temp"};
  schema.group_size = 4;
  std::istringstream in(CsvRows(8));
  const auto series = ParseCsv(in, schema);
  CHECK(series.feature_dim() == 1);
  CHECK(series.groups() == 2);

  const auto synthetic = Synthesize(3, 2, 0.5, 11);
  std::ostringstream out;
  WriteCsv(synthetic, out);
  std::istringstream back(out.str());
  const auto reread = ParseCsv(back);
  CHECK(reread.prices == synthetic.prices);
  CHECK(reread.features == synthetic.features);
  CHECK(reread.timestamps == synthetic.timestamps);
}

TEST_CASE("synthesis is seeded and realizable without noise") {
  const auto a = Synthesize(4, 3, 0.0, 42);
  const auto b = Synthesize(4, 3, 0.0, 42);
  CHECK(a.prices == b.prices);
  CHECK(a.features == b.features);
  CHECK(Synthesize(4, 3, 0.0, 43).prices != a.prices);
  CHECK(a.rows() == 4 * 48);
  CHECK(a.timestamps[49] == "d00001-s001");
  REQUIRE(a.hidden.has_value());
  for (double c : a.hidden->coefficients) {
    CHECK(std::abs(c) >= 0.5);
    CHECK(std::abs(c) <= 2.0);
  }

  const auto dataset = MakeKnapsack(a, false, 20, 0);
  const auto model = FitRidge(dataset.problem_sets);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(model.coefficient(k) ==
          doctest::Approx(a.hidden->coefficients[k]).epsilon(1e-9));
  }
  CHECK(model.intercept() == doctest::Approx(a.hidden->intercept));

  CHECK_THROWS_AS(Synthesize(0, 3, 0.0, 1), InputError);
  CHECK_THROWS_AS(Synthesize(1, 0, 0.0, 1), InputError);
  CHECK_THROWS_AS(Synthesize(1, 1, -1.0, 1), InputError);
}

TEST_CASE("residual spread matches the synthesis noise") {
  const auto series = Synthesize(500, 4, 1.0, 5);
  const auto dataset = MakeKnapsack(series, false, 20, 0);
  const auto model = FitRidge(dataset.problem_sets);
  double ss = 0.0;
  std::size_t n = 0;
  for (const auto& p : dataset.problem_sets) {
    const auto predicted = Predict(model, p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double r = predicted[i] - p.true_values()[i];
      ss += r * r;
      ++n;
    }
  }
  CHECK(std::sqrt(ss / static_cast<double>(n - 5)) ==
        doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("knapsack construction") {
  const auto series = Synthesize(3, 2, 0.3, 8);
  const auto unit = MakeKnapsack(series, false, 5, 1);
  CHECK(unit.feature_dim == 2);
  REQUIRE(unit.problem_sets.size() == 3);
  const auto& k0 = std::get<KnapsackConstraint>(unit.problem_sets[0].constraint());
  CHECK(k0.weights == std::vector<double>(48, 1.0));
  CHECK(k0.capacity == 5);
  CHECK(unit.problem_sets[1].true_values()[0] == series.prices[48]);
  CHECK_NOTHROW(MakeKnapsack(series, false, 45, 1));

  const auto weighted = MakeKnapsack(series, true, 72, 1);
  CHECK(weighted.feature_dim == 3);
  std::set<double> seen;
  for (std::size_t g = 0; g < weighted.problem_sets.size(); ++g) {
    const auto& p = weighted.problem_sets[g];
    const auto& k = std::get<KnapsackConstraint>(p.constraint());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double w = k.weights[i];
      seen.insert(w);
      CHECK(p.feature(i, 2) == w);
      CHECK(p.true_values()[i] == w * series.prices[g * 48 + i]);
      CHECK(p.true_values()[i] / w == doctest::Approx(series.prices[g * 48 + i]));
      CHECK(p.feature(i, 0) == series.feature_row(g * 48 + i)[0]);
    }
  }
  CHECK(seen == std::set<double>{3, 5, 7});
  const auto again = MakeKnapsack(series, true, 72, 1);
  CHECK(again.problem_sets[2].true_values()[7] ==
        weighted.problem_sets[2].true_values()[7]);
  CHECK_THROWS_AS(MakeKnapsack(series, false, 0, 1), InputError);
}

TEST_CASE("scheduling construction and load generation") {
  const auto load = GenerateLoad(2, 4, 48, 3);
  CHECK(load.machines.size() == 2);
  CHECK(load.jobs.size() == 4);
  CHECK_NOTHROW(ValidateConstraint(ConstraintData{load}));
  const auto series = Synthesize(2, 2, 0.1, 4);
  const auto dataset = MakeScheduling(series, load);
  REQUIRE(dataset.problem_sets.size() == 2);
  CHECK(dataset.problem_sets[0].sense() == Sense::kMinimize);
  CHECK(dataset.problem_sets[0].size() == 48);
  const auto short_load = GenerateLoad(1, 1, 12, 3);
  CHECK_THROWS_AS(MakeScheduling(series, short_load), InputError);
  CHECK_THROWS_AS(GenerateLoad(0, 1, 12, 3), InputError);
}

TEST_CASE("split counts") {
  SplitSpec one;
  one.folds = 1;
  auto splits = Split(10, one);
  REQUIRE(splits.size() == 1);
  CHECK(splits[0].train.size() == 7);
  CHECK(splits[0].validation.size() == 1);
  CHECK(splits[0].test.size() == 2);
  CHECK(splits[0].test == std::vector<std::size_t>{8, 9});

  for (int folds : {1, 5}) {
    SplitSpec spec;
    spec.folds = folds;
    for (const auto& s : Split(789, spec)) {
      CHECK(std::abs(static_cast<long>(s.train.size()) - 552) <= 1);
      CHECK(std::abs(static_cast<long>(s.validation.size()) - 79) <= 1);
      CHECK(std::abs(static_cast<long>(s.test.size()) - 157) <= 1);
    }
  }
}

TEST_CASE("folds partition the test sets and never overlap") {
  for (std::size_t n : {10u, 37u, 100u, 789u}) {
    CAPTURE(n);
    const auto splits = Split(n, {});
    CHECK(splits.size() == 5);
    std::vector<int> tested(n, 0);
    for (const auto& s : splits) {
      std::vector<int> seen(n, 0);
      for (const auto* part : {&s.train, &s.validation, &s.test}) {
        for (std::size_t i : *part) ++seen[i];
      }
      for (int c : seen) CHECK(c == 1);
      for (std::size_t i : s.test) ++tested[i];
      for (std::size_t i = 1; i < s.test.size(); ++i) {
        CHECK(s.test[i] == s.test[i - 1] + 1);
      }
    }
    for (int c : tested) CHECK(c == 1);
  }
  SplitSpec bad;
  bad.train_frac = 0.9;
  CHECK_THROWS_AS(Split(10, bad), InputError);
  bad = {};
  bad.folds = 0;
  CHECK_THROWS_AS(Split(10, bad), InputError);
  CHECK_THROWS_AS(Split(2, {}), InputError);
}

TEST_CASE("subset picks problem sets by index") {
  const auto dataset = MakeKnapsack(Synthesize(4, 1, 0.0, 1), false, 3, 0);
  const std::vector<std::size_t> pick{3, 1};
  const auto subset = Subset(dataset.problem_sets, pick);
  REQUIRE(subset.size() == 2);
  CHECK(subset[0].id() == "day3");
  CHECK(subset[1].id() == "day1");
}

TEST_CASE("dataset files round-trip") {
  const auto series = Synthesize(3, 2, 0.4, 6);
  for (const auto& dataset :
       {MakeKnapsack(series, true, 50, 2),
        MakeScheduling(series, GenerateLoad(2, 3, 48, 5))}) {
    std::ostringstream out;
    WriteDataset(dataset, out);
    std::istringstream in(out.str());
    const auto back = ReadDataset(in);
    CHECK(back.feature_dim == dataset.feature_dim);
    REQUIRE(back.problem_sets.size() == dataset.problem_sets.size());
    for (std::size_t i = 0; i < back.problem_sets.size(); ++i) {
      const auto& a = dataset.problem_sets[i];
      const auto& b = back.problem_sets[i];
      CHECK(a.id() == b.id());
      CHECK(std::equal(a.true_values().begin(), a.true_values().end(),
                       b.true_values().begin(), b.true_values().end()));
      CHECK(std::equal(a.features().begin(), a.features().end(),
                       b.features().begin(), b.features().end()));
      CHECK(a.sense() == b.sense());
      Oracle oracle;
      CHECK(oracle.TrueOptimalUtility(a) == oracle.TrueOptimalUtility(b));
    }
    std::ostringstream again;
    WriteDataset(back, again);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("malformed dataset files are rejected with a line number") {
  std::istringstream wrong("not-a-dataset\n");
  CHECK_THROWS_AS(ReadDataset(wrong), InputError);
  std::istringstream truncated(
      "dnl-dataset 1\nfamily knapsack\nfeature_dim 1\nproblems 1\n"
      "problem day0 2\nknapsack 1 1 1\nrow 1 2\n");
  try {
    ReadDataset(truncated);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}
