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

#include <algorithm>
#include <random>
#include <sstream>

#include "dnl/regret.hpp"
#include "dnl/trainer.hpp"
#include "test_util.hpp"

using namespace dnl;

namespace {

TransitionProfile ProfileAt(std::vector<double> points, double lower,
                            double upper) {
  TransitionProfile profile;
  profile.lower = lower;
  profile.upper = upper;
  for (double p : points) profile.intervals.push_back({p - 0.01, p + 0.01});
  return profile;
}

std::vector<ProblemSet> RandomBatch(std::uint64_t seed, int count,
                                    std::size_t items = 8) {
  std::mt19937_64 rng(seed);
  std::vector<ProblemSet> problems;
  for (int i = 0; i < count; ++i) {
    problems.push_back(testing::RandomKnapsackProblem(
        rng, items, 2, "b" + std::to_string(seed) + "-" + std::to_string(i)));
  }
  return problems;
}

double BatchMeanRegret(const LinearModel& model, const Batch& batch,
                       const Oracle& oracle) {
  double sum = 0.0;
  for (const ProblemSet* p : batch) sum += RegretOf(model, *p, oracle).regret;
  return sum / static_cast<double>(batch.size());
}

// Values exactly linear in features: 1.5 x0 - 0.5 x1 + 5.
std::vector<ProblemSet> RealizableProblems(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  auto constraint = std::make_shared<const ConstraintData>(
      KnapsackConstraint{std::vector<double>(5, 1.0), 2.0});
  std::vector<ProblemSet> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> features(10), values(5);
    for (int j = 0; j < 5; ++j) {
      features[2 * j] = gaussian(rng);
      features[2 * j + 1] = gaussian(rng);
      values[j] = 1.5 * features[2 * j] - 0.5 * features[2 * j + 1] + 5.0;
    }
    out.emplace_back("r" + std::to_string(i), std::move(values),
                     std::move(features), 2, constraint);
  }
  return out;
}

}  // namespace

TEST_CASE("variant names round-trip") {
  for (auto v : {Variant::kDnl, Variant::kDnlMax, Variant::kDnlGreedy}) {
    CHECK(ParseVariant(ToString(v)) == v);
  }
  CHECK_FALSE(ParseVariant("ridge").has_value());
}

TEST_CASE("config validation") {
  TrainConfig config;
  CHECK_NOTHROW(config.Validate());
  config.batch_size = 0;
  CHECK_THROWS_AS(config.Validate(), InputError);
  config = {};
  config.learning_rate = 0.0;
  CHECK_THROWS_AS(config.Validate(), InputError);
  config = {};
  config.learning_rate = 1.5;
  CHECK_THROWS_AS(config.Validate(), InputError);
  config = {};
  config.max_seconds = 0.0;
  CHECK_THROWS_AS(config.Validate(), InputError);
  config = {};
  config.early_stop_patience = -1;
  CHECK_THROWS_AS(config.Validate(), InputError);
}

TEST_CASE("candidate parameters are midpoints between transitions") {
  const auto profile = ProfileAt({0, 2}, -5, 5);
  const auto c = CandidateBetas(profile, 0.7);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == doctest::Approx(-2.5));
  CHECK(c[1] == 0.7);
  CHECK(c[2] == doctest::Approx(1.0));
  CHECK(c[3] == doctest::Approx(3.5));

  const auto none = CandidateBetas(ProfileAt({}, -5, 3), 1.0);
  CHECK(none == std::vector<double>{-1.0, 1.0});

  const std::vector<TransitionProfile> two{ProfileAt({0}, -5, 5),
                                           ProfileAt({2}, -5, 5)};
  const auto u = CandidateBetas(two, 4.0);
  REQUIRE(u.size() == 5);
  CHECK(u[0] == doctest::Approx(-2.5));
  CHECK(u[1] == doctest::Approx(-1.5));
  CHECK(u[2] == doctest::Approx(2.5));
  CHECK(u[3] == doctest::Approx(3.5));
  CHECK(u[4] == 4.0);

  auto greedy = ProfileAt({2}, -5, 5);
  greedy.improving_beta = 1.99;
  CHECK(CandidateBetas(greedy, 3.0) == std::vector<double>{1.99, 3.0});
}

TEST_CASE("full selection on the three-item example reaches zero regret") {
  const std::vector<ProblemSet> problems{testing::ThreeItemExample()};
  const auto batch = AsBatch(problems);
  const auto model = testing::ThreeItemModel(3.0);
  Oracle oracle;
  const auto profiles =
      ExtractProfiles(batch, model, 0, SearchSpecAround(3.0), oracle,
                      Extraction::kFull, Execution::kSerial);
  // Region [-1.5, 7.5]: candidates near -0.75, 1, 4.75 and the old value 3.
  const auto candidates = CandidateBetas(profiles, 3.0);
  const auto chosen = SelectBetaFull(candidates, batch, model, 0, oracle);
  CHECK(chosen.beta == doctest::Approx(1.0).epsilon(0.01));
  CHECK(chosen.mean_regret == 0.0);
  CHECK(chosen.evaluations == candidates.size());

  const std::vector<double> only{3.0};
  CHECK(SelectBetaFull(only, batch, model, 0, oracle).beta == 3.0);
  CHECK_THROWS_AS(SelectBetaFull({}, batch, model, 0, oracle), InputError);
}

TEST_CASE("full selection is the exhaustive argmin with ties toward the old value") {
  Oracle oracle;
  for (int trial = 0; trial < 10; ++trial) {
    const auto problems = RandomBatch(100 + trial, 3);
    const auto batch = AsBatch(problems);
    const LinearModel model({0.9, -0.4}, 5.0);
    const auto profiles =
        ExtractProfiles(batch, model, 0, SearchSpecAround(0.9), oracle,
                        Extraction::kFull, Execution::kSerial);
    const auto candidates = CandidateBetas(profiles, 0.9);
    const auto chosen = SelectBetaFull(candidates, batch, model, 0, oracle);
    double best = 1e300;
    for (double c : candidates) {
      best = std::min(best, BatchMeanRegret(model.WithCoefficient(0, c), batch,
                                            oracle));
    }
    CHECK(chosen.mean_regret == doctest::Approx(best));
    CHECK(BatchMeanRegret(model.WithCoefficient(0, chosen.beta), batch,
                          oracle) == doctest::Approx(best));
    for (double c : candidates) {
      const double r =
          BatchMeanRegret(model.WithCoefficient(0, c), batch, oracle);
      if (r <= best + 1e-9) {
        CHECK(std::abs(chosen.beta - 0.9) <= std::abs(c - 0.9));
      }
    }
  }
}

TEST_CASE("max selection sits between full selection and keeping the old value") {
  for (int trial = 0; trial < 10; ++trial) {
    CAPTURE(trial);
    const auto problems = RandomBatch(200 + trial, 5);
    const auto batch = AsBatch(problems);
    const LinearModel model({-1.2, 0.6}, 5.0);
    Oracle oracle;
    for (const auto& p : problems) oracle.TrueOptimalUtility(p);
    const auto profiles =
        ExtractProfiles(batch, model, 1, SearchSpecAround(0.6), oracle,
                        Extraction::kFull, Execution::kSerial);
    const auto before = oracle.calls();
    const auto max = SelectBetaMax(profiles, batch, model, 1, oracle);
    CHECK(oracle.calls() - before == max.evaluations);
    CHECK(max.evaluations <= SelectBetaMaxBudget(profiles, 0.6));
    const auto full =
        SelectBetaFull(CandidateBetas(profiles, 0.6), batch, model, 1, oracle);
    const double keep = BatchMeanRegret(model, batch, oracle);
    CHECK(full.mean_regret <= max.mean_regret + 1e-9);
    CHECK(max.mean_regret <= keep + 1e-9);
  }
}

TEST_CASE("max selection on a single problem set equals full selection") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto problems = RandomBatch(300 + trial, 1, 10);
    const auto batch = AsBatch(problems);
    const LinearModel model({0.3, 1.7}, 5.0);
    Oracle oracle;
    const auto profiles =
        ExtractProfiles(batch, model, 0, SearchSpecAround(0.3), oracle,
                        Extraction::kFull, Execution::kSerial);
    const auto max = SelectBetaMax(profiles, batch, model, 0, oracle);
    const auto full =
        SelectBetaFull(CandidateBetas(profiles, 0.3), batch, model, 0, oracle);
    CHECK(max.beta == full.beta);
    CHECK(max.mean_regret == full.mean_regret);
  }
}

TEST_CASE("max selection matches full when one set's winner is globally best") {
  // Two copies of the three-item example: both sets share the winner.
  const auto a = testing::ThreeItemExample();
  const ProblemSet b("three-items-copy",
                     std::vector<double>(a.true_values().begin(),
                                         a.true_values().end()),
                     std::vector<double>(a.features().begin(),
                                         a.features().end()),
                     2, a.shared_constraint());
  const std::vector<ProblemSet> problems{a, b};
  const auto batch = AsBatch(problems);
  const auto model = testing::ThreeItemModel(3.0);
  Oracle oracle;
  const auto profiles =
      ExtractProfiles(batch, model, 0, SearchSpecAround(3.0), oracle,
                      Extraction::kFull, Execution::kSerial);
  const auto max = SelectBetaMax(profiles, batch, model, 0, oracle);
  const auto full =
      SelectBetaFull(CandidateBetas(profiles, 3.0), batch, model, 0, oracle);
  CHECK(max.beta == full.beta);
  CHECK(max.mean_regret == 0.0);
}

TEST_CASE("learning rate one jumps to the batch optimum") {
  const auto problems = RandomBatch(400, 6);
  const LinearModel warm({0.5}, 5.0);
  std::vector<ProblemSet> single;
  for (const auto& p : problems) {
    std::vector<double> features(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) features[i] = p.feature(i, 0);
    single.emplace_back(p.id(),
                        std::vector<double>(p.true_values().begin(),
                                            p.true_values().end()),
                        std::move(features), 1, p.shared_constraint());
  }
  Oracle oracle;
  const auto batch = AsBatch(single);
  const auto profiles =
      ExtractProfiles(batch, warm, 0, SearchSpecAround(0.5), oracle,
                      Extraction::kFull, Execution::kSerial);
  const auto expected =
      SelectBetaFull(CandidateBetas(profiles, 0.5), batch, warm, 0, oracle);

  TrainConfig config;
  config.batch_size = 64;
  config.learning_rate = 1.0;
  config.max_epochs = 1;
  const auto trace = Train(single, single, config, oracle, warm);
  CHECK(trace.final_model.coefficient(0) == expected.beta);
  CHECK(trace.final_model.intercept() == 5.0);
  CHECK(trace.epochs.size() == 2);
  CHECK(trace.epochs[1].train_regret == doctest::Approx(expected.mean_regret));
  CHECK(trace.epochs[1].train_regret <= trace.epochs[0].train_regret + 1e-9);

  config.learning_rate = 0.25;
  const auto damped = Train(single, single, config, oracle, warm);
  CHECK(damped.final_model.coefficient(0) ==
        doctest::Approx(0.5 + 0.25 * (expected.beta - 0.5)));
}

TEST_CASE("training is deterministic and execution-independent") {
  const auto problems = RandomBatch(500, 10);
  const std::span<const ProblemSet> all(problems);
  const LinearModel warm({0.4, -0.8}, 5.0);
  for (auto variant : {Variant::kDnl, Variant::kDnlMax, Variant::kDnlGreedy}) {
    TrainConfig config;
    config.variant = variant;
    config.batch_size = 4;
    config.max_epochs = 3;
    config.rng_seed = 9;
    std::string csv[3];
    for (int run = 0; run < 3; ++run) {
      config.execution = run == 2 ? Execution::kSerial : Execution::kParallel;
      Oracle oracle;
      const auto trace = Train(all.first(7), all.subspan(7), config, oracle,
                               warm);
      std::ostringstream out;
      WriteTraceCsv(trace, out);
      csv[run] = out.str();
      CHECK(trace.oracle_calls == oracle.calls());
      CHECK(trace.epochs.back().oracle_calls == trace.oracle_calls);
    }
    CHECK(csv[0] == csv[1]);
    CHECK(csv[0] == csv[2]);
    CHECK(csv[0].rfind("epoch,train_regret,val_regret,oracle_calls\n", 0) == 0);
  }
}

TEST_CASE("realizable data is learned to zero regret") {
  const auto problems = RealizableProblems(7, 12);
  Oracle oracle;
  TrainConfig config;
  config.batch_size = 4;
  config.max_epochs = 20;
  config.early_stop_patience = 0;
  const auto trace =
      Train(problems, problems, config, oracle, LinearModel({2.25, -0.25}, 5.0));
  CHECK(trace.epochs[0].train_regret > 0.0);
  const bool reached = std::any_of(
      trace.epochs.begin() + 1, trace.epochs.end(),
      [](const EpochRecord& r) { return r.train_regret == 0.0; });
  CHECK(reached);
}

TEST_CASE("early stopping keeps the best validation model") {
  const auto problems = RealizableProblems(8, 6);
  Oracle oracle;
  TrainConfig config;
  config.max_epochs = 10;
  config.early_stop_patience = 2;
  // A perfect warmstart never strictly improves, so training stops early.
  const LinearModel perfect({1.5, -0.5}, 5.0);
  const auto trace = Train(problems, problems, config, oracle, perfect);
  CHECK(trace.epochs.size() == 3);
  CHECK(trace.best_epoch == 0);
  CHECK(trace.best_model.coefficient(0) == 1.5);

  const auto noisy = RandomBatch(600, 8);
  const std::span<const ProblemSet> all(noisy);
  config.early_stop_patience = 1;
  config.max_epochs = 6;
  const auto t = Train(all.first(5), all.subspan(5), config, oracle,
                       LinearModel({2.0, 2.0}, 5.0));
  const auto best = std::min_element(
      t.epochs.begin(), t.epochs.end(),
      [](const EpochRecord& a, const EpochRecord& b) {
        return a.val_regret < b.val_regret;
      });
  CHECK(t.best_epoch == best->epoch);
  CHECK(BatchMeanRegret(t.best_model, AsBatch(all.subspan(5)), oracle) ==
        doctest::Approx(best->val_regret));
}

TEST_CASE("wall-clock limit truncates but keeps a valid trace") {
  const auto problems = RandomBatch(700, 8);
  Oracle oracle;
  TrainConfig config;
  config.batch_size = 1;
  config.max_epochs = 50;
  config.max_seconds = 1e-6;
  const auto trace =
      Train(problems, problems, config, oracle, LinearModel({1.0, 1.0}, 5.0));
  CHECK(trace.truncated);
  CHECK(trace.epochs.size() == 2);
  std::ostringstream timing;
  WriteTimingCsv(trace, timing);
  CHECK(timing.str().rfind("epoch,seconds\n0,", 0) == 0);
}

TEST_CASE("training rejects mismatched inputs") {
  const auto problems = RandomBatch(800, 2);
  Oracle oracle;
  CHECK_THROWS_AS(Train(problems, problems, {}, oracle, LinearModel({1.0}, 0)),
                  InputError);
  CHECK_THROWS_AS(Train({}, problems, {}, oracle, LinearModel({1.0, 1.0}, 0)),
                  InputError);
}
