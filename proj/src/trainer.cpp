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

#include "dnl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

namespace dnl {

std::string ToString(Variant variant) {
  switch (variant) {
    case Variant::kDnl:
      return "dnl";
    case Variant::kDnlMax:
      return "dnl-max";
    case Variant::kDnlGreedy:
      return "dnl-greedy";
  }
  return "unknown";
}

std::optional<Variant> ParseVariant(const std::string& name) {
  if (name == "dnl") return Variant::kDnl;
  if (name == "dnl-max") return Variant::kDnlMax;
  if (name == "dnl-greedy") return Variant::kDnlGreedy;
  return std::nullopt;
}

void TrainConfig::Validate() const {
  if (batch_size < 1) throw InputError("batch size must be at least 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw InputError("learning rate must lie in (0, 1]");
  }
  if (max_epochs < 0) throw InputError("max_epochs must be nonnegative");
  if (!(max_seconds > 0.0)) throw InputError("max_seconds must be positive");
  if (early_stop_patience < 0) throw InputError("patience must be nonnegative");
}

std::vector<double> CandidateBetas(const TransitionProfile& profile,
                                   double beta_old) {
  std::vector<double> out{beta_old};
  if (profile.improving_beta) {
    out.push_back(*profile.improving_beta);
  } else {
    double left = profile.lower;
    for (const auto& interval : profile.intervals) {
      const double point = interval.mid();
      out.push_back(0.5 * (left + point));
      left = point;
    }
    out.push_back(0.5 * (left + profile.upper));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> CandidateBetas(std::span<const TransitionProfile> profiles,
                                   double beta_old) {
  std::vector<double> out{beta_old};
  for (const auto& profile : profiles) {
    const auto own = CandidateBetas(profile, beta_old);
    out.insert(out.end(), own.begin(), own.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<CoordinateLine> LinesFor(const Batch& batch,
                                     const LinearModel& model,
                                     std::size_t beta_index) {
  std::vector<CoordinateLine> lines;
  lines.reserve(batch.size());
  for (const ProblemSet* p : batch) lines.emplace_back(model, *p, beta_index);
  return lines;
}

// Index of the best candidate: minimal score, ties (within tolerance) broken
// toward beta_old and then toward the smaller value.
std::size_t ChooseIndex(std::span<const double> candidates,
                        std::span<const double> scores, double beta_old) {
  const double best = *std::min_element(scores.begin(), scores.end());
  std::size_t chosen = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (scores[c] > best + kObjectiveTolerance) continue;
    if (chosen == candidates.size()) {
      chosen = c;
      continue;
    }
    const double d = std::abs(candidates[c] - beta_old);
    const double d_best = std::abs(candidates[chosen] - beta_old);
    if (d < d_best || (d == d_best && candidates[c] < candidates[chosen])) {
      chosen = c;
    }
  }
  return chosen;
}

double Mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

}  // namespace

Selection SelectBetaFull(std::span<const double> candidates, const Batch& batch,
                         const LinearModel& model, std::size_t beta_index,
                         const Oracle& oracle, Execution execution) {
  if (candidates.empty()) throw InputError("no candidate parameters");
  const auto lines = LinesFor(batch, model, beta_index);
  std::vector<RegretQuery> queries;
  queries.reserve(candidates.size() * batch.size());
  for (double c : candidates) {
    for (std::size_t i = 0; i < batch.size(); ++i) queries.push_back({i, c});
  }
  const auto regrets = EvaluateRegrets(lines, queries, oracle, execution);
  std::vector<double> means(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    means[c] = Mean({regrets.data() + c * batch.size(), batch.size()});
  }
  const std::size_t chosen =
      ChooseIndex(candidates, means, model.coefficient(beta_index));
  return {candidates[chosen], means[chosen], queries.size()};
}

std::uint64_t SelectBetaMaxBudget(std::span<const TransitionProfile> profiles,
                                  double beta_old) {
  std::uint64_t own = 0;
  for (const auto& profile : profiles) {
    own += CandidateBetas(profile, beta_old).size();
  }
  const std::uint64_t n = profiles.size();
  return own + (n == 0 ? 0 : (n - 1) * n);
}

Selection SelectBetaMax(std::span<const TransitionProfile> profiles,
                        const Batch& batch, const LinearModel& model,
                        std::size_t beta_index, const Oracle& oracle,
                        Execution execution) {
  if (profiles.size() != batch.size()) {
    throw InputError("one transition profile per problem set is required");
  }
  const double beta_old = model.coefficient(beta_index);
  const auto lines = LinesFor(batch, model, beta_index);
  const std::size_t n = batch.size();

  std::vector<std::vector<double>> own(n);
  std::vector<RegretQuery> queries;
  for (std::size_t i = 0; i < n; ++i) {
    own[i] = CandidateBetas(profiles[i], beta_old);
    for (double c : own[i]) queries.push_back({i, c});
  }
  auto regrets = EvaluateRegrets(lines, queries, oracle, execution);

  std::vector<std::map<double, double>> known(n);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    known[queries[q].problem][queries[q].beta] = regrets[q];
  }
  std::vector<double> winners{beta_old};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> scores;
    scores.reserve(own[i].size());
    for (double c : own[i]) scores.push_back(known[i].at(c));
    winners.push_back(own[i][ChooseIndex(own[i], scores, beta_old)]);
  }
  std::sort(winners.begin(), winners.end());
  winners.erase(std::unique(winners.begin(), winners.end()), winners.end());

  std::vector<RegretQuery> cross;
  for (double w : winners) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!known[i].contains(w)) cross.push_back({i, w});
    }
  }
  const auto cross_regrets = EvaluateRegrets(lines, cross, oracle, execution);
  for (std::size_t q = 0; q < cross.size(); ++q) {
    known[cross[q].problem][cross[q].beta] = cross_regrets[q];
  }

  std::vector<double> means(winners.size());
  for (std::size_t w = 0; w < winners.size(); ++w) {
    std::vector<double> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = known[i].at(winners[w]);
    means[w] = Mean(column);
  }
  const std::size_t chosen = ChooseIndex(winners, means, beta_old);
  return {winners[chosen], means[chosen], queries.size() + cross.size()};
}

TrainTrace Train(std::span<const ProblemSet> train,
                 std::span<const ProblemSet> validation,
                 const TrainConfig& config, const Oracle& oracle,
                 const LinearModel& warmstart) {
  config.Validate();
  if (train.empty()) throw InputError("empty training split");
  for (const auto* split : {&train, &validation}) {
    for (const auto& p : *split) {
      if (p.feature_dim() != warmstart.dim()) {
        throw InputError("warmstart dimension does not match problem set " +
                         p.id());
      }
    }
  }

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  const std::uint64_t calls_at_start = oracle.calls();
  const Batch train_batch = AsBatch(train);
  const Batch val_batch = AsBatch(validation);
  const Extraction extraction = config.variant == Variant::kDnlGreedy
                                    ? Extraction::kGreedy
                                    : Extraction::kFull;

  TrainTrace trace;
  LinearModel model = warmstart;
  auto record = [&](int epoch) {
    EpochRecord r;
    r.epoch = epoch;
    r.train_regret =
        Mean(ModelRegrets(model, train_batch, oracle, config.execution));
    r.val_regret =
        val_batch.empty()
            ? r.train_regret
            : Mean(ModelRegrets(model, val_batch, oracle, config.execution));
    r.seconds = elapsed();
    r.oracle_calls = oracle.calls() - calls_at_start;
    trace.epochs.push_back(r);
    return r.val_regret;
  };

  double best_val = record(0);
  trace.best_model = model;
  trace.best_epoch = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.rng_seed);
  const auto batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    try {
      for (std::size_t b = 0; b < order.size(); b += batch_size) {
        Batch batch;
        for (std::size_t j = b; j < std::min(order.size(), b + batch_size);
             ++j) {
          batch.push_back(&train[order[j]]);
        }
        for (std::size_t k = 0; k < model.dim(); ++k) {
          const double beta_old = model.coefficient(k);
          const SearchSpec spec = SearchSpecAround(beta_old);
          const auto profiles = ExtractProfiles(batch, model, k, spec, oracle,
                                                extraction, config.execution);
          const Selection chosen =
              config.variant == Variant::kDnl
                  ? SelectBetaFull(CandidateBetas(profiles, beta_old), batch,
                                   model, k, oracle, config.execution)
                  : SelectBetaMax(profiles, batch, model, k, oracle,
                                  config.execution);
          model = model.WithCoefficient(
              k, beta_old + config.learning_rate * (chosen.beta - beta_old));
        }
        if (elapsed() > config.max_seconds) {
          trace.truncated = true;
          break;
        }
      }
    } catch (const SolverError& e) {
      throw SolverError("epoch " + std::to_string(epoch) + ": " + e.what());
    }

    const double val = record(epoch);
    if (val < best_val) {
      best_val = val;
      trace.best_model = model;
      trace.best_epoch = epoch;
    } else if (config.early_stop_patience > 0 &&
               epoch - trace.best_epoch >= config.early_stop_patience) {
      break;
    }
    if (trace.truncated) break;
  }
  trace.final_model = model;
  trace.oracle_calls = oracle.calls() - calls_at_start;
  return trace;
}

void WriteTraceCsv(const TrainTrace& trace, std::ostream& out) {
  out << "epoch,train_regret,val_regret,oracle_calls\n";
  char line[160];
  for (const auto& r : trace.epochs) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%llu\n", r.epoch,
                  r.train_regret, r.val_regret,
                  static_cast<unsigned long long>(r.oracle_calls));
    out << line;
  }
}

void WriteTimingCsv(const TrainTrace& trace, std::ostream& out) {
  out << "epoch,seconds\n";
  char line[64];
  for (const auto& r : trace.epochs) {
    std::snprintf(line, sizeof(line), "%d,%.6f\n", r.epoch, r.seconds);
    out << line;
  }
}

}  // namespace dnl
