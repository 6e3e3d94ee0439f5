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

#include "dnl/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dnl/data.hpp"
#include "dnl/oracle.hpp"
#include "dnl/ridge.hpp"
#include "dnl/trainer.hpp"

namespace dnl::cli {
namespace {

namespace fs = std::filesystem;

std::string Num(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", x);
  return buffer;
}

struct DataOptions {
  std::string data_path;
  int days = 30;
  int features = 4;
  double noise = 1.0;
  std::size_t group = kDefaultGroupSize;
  std::string problem = "unit-knapsack";
  std::vector<double> capacities;
  std::string load = "2x4";
  std::uint64_t seed = 0;
};

struct RunOptions {
  std::vector<std::string> variants;
  int epochs = 30;
  double max_seconds = 120.0;
  int batch = 32;
  double lr = 0.1;
  int patience = 5;
  int folds = 5;
  int fold = 0;
  bool serial = false;
  std::string out = "out";
};

void AddDataOptions(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.data_path, "price CSV (synthesized if omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--days", d.days, "synthetic days")->check(CLI::PositiveNumber);
  cmd->add_option("--features", d.features, "synthetic feature count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--noise", d.noise, "synthetic noise sigma")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--group", d.group, "rows per problem set")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--problem", d.problem, "problem family")
      ->check(CLI::IsMember({"unit-knapsack", "weighted-knapsack", "scheduling"}));
  cmd->add_option("--capacity", d.capacities, "knapsack capacity (repeatable)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--load", d.load, "scheduling load as MACHINESxJOBS");
  cmd->add_option("--seed", d.seed, "random seed");
}

void AddRunOptions(CLI::App* cmd, RunOptions& r) {
  cmd->add_option("--variant", r.variants,
                  "ridge, dnl, dnl-max or dnl-greedy (repeatable)")
      ->check(CLI::IsMember({"ridge", "dnl", "dnl-max", "dnl-greedy"}));
  cmd->add_option("--epochs", r.epochs, "maximum epochs")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-seconds", r.max_seconds, "wall-clock limit per run")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--batch", r.batch, "mini-batch size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr", r.lr, "learning rate")->check(CLI::Range(1e-12, 1.0));
  cmd->add_option("--patience", r.patience, "early-stopping patience")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--folds", r.folds, "number of folds")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--serial", r.serial, "disable OpenMP kernels");
  cmd->add_option("--out", r.out, "output directory");
}

double DefaultCapacity(const std::string& problem) {
  return problem == "weighted-knapsack" ? 72.0 : 20.0;
}

Dataset BuildDataset(const DataOptions& d, double capacity, std::ostream& err) {
  RawSeries series;
  if (!d.data_path.empty()) {
    CsvSchema schema;
    schema.group_size = d.group;
    series = LoadCsv(d.data_path, schema, &err);
  } else {
    series = Synthesize(d.days, d.features, d.noise, d.seed, d.group);
  }
  if (d.problem == "scheduling") {
    int machines = 0;
    int jobs = 0;
    char x = 0;
    std::istringstream spec(d.load);
    if (!(spec >> machines >> x >> jobs) || (x != 'x' && x != 'X')) {
      throw InputError("--load must look like 2x4");
    }
    const auto load = GenerateLoad(machines, jobs,
                                   static_cast<int>(series.group_size),
                                   d.seed + 1);
    return MakeScheduling(series, load);
  }
  return MakeKnapsack(series, d.problem == "weighted-knapsack", capacity,
                      d.seed + 2);
}

TrainConfig MakeConfig(const RunOptions& r, Variant variant,
                       std::uint64_t seed) {
  TrainConfig config;
  config.variant = variant;
  config.batch_size = r.batch;
  config.learning_rate = r.lr;
  config.max_epochs = r.epochs;
  config.max_seconds = r.max_seconds;
  config.early_stop_patience = r.patience;
  config.rng_seed = seed;
  config.execution = r.serial ? Execution::kSerial : Execution::kParallel;
  return config;
}

struct FoldData {
  std::vector<ProblemSet> train;
  std::vector<ProblemSet> validation;
  std::vector<ProblemSet> test;
};

FoldData MaterializeFold(const Dataset& dataset, const FoldSplit& split) {
  return {Subset(dataset.problem_sets, split.train),
          Subset(dataset.problem_sets, split.validation),
          Subset(dataset.problem_sets, split.test)};
}

struct FittedModel {
  LinearModel model;
  TrainTrace trace;  // empty for ridge
};

FittedModel Fit(const std::string& variant, const FoldData& fold,
                const RunOptions& r, std::uint64_t seed, const Oracle& oracle) {
  LinearModel ridge = FitRidgeTuned(fold.train, fold.validation, oracle);
  if (variant == "ridge") return {ridge, {}};
  const auto parsed = ParseVariant(variant);
  if (!parsed) throw InputError("unknown variant '" + variant + "'");
  auto trace = Train(fold.train, fold.validation,
                     MakeConfig(r, *parsed, seed), oracle, ridge);
  LinearModel best = trace.best_model;
  return {std::move(best), std::move(trace)};
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir + "'");
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

struct Row {
  std::string model;
  std::string fold;
  RegretSummary summary;
};

RegretSummary AggregateFolds(std::span<const RegretSummary> folds) {
  std::vector<double> means;
  for (const auto& f : folds) means.push_back(f.mean);
  return Summarize(means);
}

int CmdGenerate(const DataOptions& d, const std::string& out_path,
                std::ostream& out) {
  const auto series = Synthesize(d.days, d.features, d.noise, d.seed, d.group);
  auto file = OpenOut(out_path);
  WriteCsv(series, file);
  out << "generated days=" << d.days << " p=" << d.features
      << " rows=" << series.rows() << " seed=" << d.seed << " -> " << out_path
      << "\n";
  return kSuccess;
}

int CmdTrain(const DataOptions& d, RunOptions r, std::ostream& out,
             std::ostream& err) {
  if (r.variants.size() > 1) throw InputError("train takes a single --variant");
  const std::string variant = r.variants.empty() ? "dnl" : r.variants.front();
  const double capacity =
      d.capacities.empty() ? DefaultCapacity(d.problem) : d.capacities.front();
  const Dataset dataset = BuildDataset(d, capacity, err);
  const auto splits = Split(dataset.problem_sets.size(), {r.folds});
  if (r.fold < 0 || r.fold >= r.folds) throw InputError("--fold out of range");
  const FoldData fold = MaterializeFold(dataset, splits[r.fold]);

  Oracle oracle;
  const FittedModel fitted = Fit(variant, fold, r, d.seed, oracle);
  EnsureDir(r.out);
  {
    auto f = OpenOut(fs::path(r.out) / "model.txt");
    WriteModel(fitted.model, f);
  }
  if (variant != "ridge") {
    auto trace = OpenOut(fs::path(r.out) / "trace.csv");
    WriteTraceCsv(fitted.trace, trace);
    auto timing = OpenOut(fs::path(r.out) / "timing.csv");
    WriteTimingCsv(fitted.trace, timing);
  }
  const auto test = EvaluateModelRegret(fitted.model, fold.test, oracle);
  out << "variant=" << variant << " fold=" << r.fold
      << " test_regret_mean=" << Num(test.mean)
      << " test_regret_std=" << Num(test.stddev);
  if (variant != "ridge") {
    out << " best_epoch=" << fitted.trace.best_epoch
        << " epochs=" << fitted.trace.epochs.size() - 1
        << " oracle_calls=" << fitted.trace.oracle_calls
        << (fitted.trace.truncated ? " (time limit reached)" : "");
  }
  out << "\n";
  return kSuccess;
}

int CmdEval(const DataOptions& d, RunOptions r,
            const std::vector<std::string>& model_specs, std::ostream& out,
            std::ostream& err) {
  const double capacity =
      d.capacities.empty() ? DefaultCapacity(d.problem) : d.capacities.front();
  const Dataset dataset = BuildDataset(d, capacity, err);
  const auto splits = Split(dataset.problem_sets.size(), {r.folds});

  std::vector<std::pair<std::string, LinearModel>> fixed;
  for (const auto& spec : model_specs) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model '" + path + "'");
    fixed.emplace_back(name, ReadModel(in));
  }
  if (fixed.empty() && r.variants.empty()) r.variants = {"ridge", "dnl"};

  std::vector<std::string> names;
  for (const auto& [name, model] : fixed) names.push_back(name);
  for (const auto& v : r.variants) names.push_back(v);
  std::vector<std::vector<RegretSummary>> per_fold(names.size());

  Oracle oracle;
  for (std::size_t f = 0; f < splits.size(); ++f) {
    const FoldData fold = MaterializeFold(dataset, splits[f]);
    std::size_t slot = 0;
    for (const auto& [name, model] : fixed) {
      per_fold[slot++].push_back(EvaluateModelRegret(model, fold.test, oracle));
    }
    for (const auto& v : r.variants) {
      const auto fitted = Fit(v, fold, r, d.seed + f, oracle);
      per_fold[slot++].push_back(
          EvaluateModelRegret(fitted.model, fold.test, oracle));
    }
  }

  EnsureDir(r.out);
  auto file = OpenOut(fs::path(r.out) / "regret.csv");
  std::ostringstream table;
  table << "model,fold,mean,std,count\n";
  for (std::size_t m = 0; m < names.size(); ++m) {
    for (std::size_t f = 0; f < per_fold[m].size(); ++f) {
      const auto& s = per_fold[m][f];
      table << names[m] << ',' << f << ',' << Num(s.mean) << ','
            << Num(s.stddev) << ',' << s.count << '\n';
    }
  }
  for (std::size_t m = 0; m < names.size(); ++m) {
    const auto agg = AggregateFolds(per_fold[m]);
    table << names[m] << ",all," << Num(agg.mean) << ',' << Num(agg.stddev)
          << ',' << agg.count << '\n';
  }
  file << table.str();
  out << table.str();
  return kSuccess;
}

int CmdSweep(const DataOptions& d, RunOptions r, std::ostream& out,
             std::ostream& err) {
  if (d.capacities.empty()) throw InputError("sweep needs at least one --capacity");
  if (r.variants.empty()) r.variants = {"ridge", "dnl-greedy"};
  std::vector<double> capacities = d.capacities;
  std::sort(capacities.begin(), capacities.end());

  std::ostringstream table;
  table << "capacity,variant,mean,std\n";
  for (double capacity : capacities) {
    const Dataset dataset = BuildDataset(d, capacity, err);
    const auto splits = Split(dataset.problem_sets.size(), {r.folds});
    Oracle oracle;
    std::vector<std::vector<RegretSummary>> per_fold(r.variants.size());
    for (std::size_t f = 0; f < splits.size(); ++f) {
      const FoldData fold = MaterializeFold(dataset, splits[f]);
      for (std::size_t v = 0; v < r.variants.size(); ++v) {
        const auto fitted = Fit(r.variants[v], fold, r, d.seed + f, oracle);
        per_fold[v].push_back(
            EvaluateModelRegret(fitted.model, fold.test, oracle));
      }
    }
    for (std::size_t v = 0; v < r.variants.size(); ++v) {
      const auto agg = AggregateFolds(per_fold[v]);
      table << Num(capacity) << ',' << r.variants[v] << ',' << Num(agg.mean)
            << ',' << Num(agg.stddev) << '\n';
    }
  }
  EnsureDir(r.out);
  auto file = OpenOut(fs::path(r.out) / "sweep.csv");
  file << table.str();
  out << table.str();
  return kSuccess;
}

}  // namespace

void WriteModel(const LinearModel& model, std::ostream& out) {
  char buffer[40];
  out << model.dim() << '\n';
  for (std::size_t k = 0; k < model.dim(); ++k) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", model.coefficient(k));
    out << (k ? " " : "") << buffer;
  }
  std::snprintf(buffer, sizeof(buffer), "%.17g", model.intercept());
  out << '\n' << buffer << '\n';
}

LinearModel ReadModel(std::istream& in) {
  std::size_t p = 0;
  if (!(in >> p)) throw InputError("model file: missing dimension");
  std::vector<double> beta(p);
  for (auto& b : beta) {
    if (!(in >> b)) throw InputError("model file: missing coefficient");
  }
  double intercept = 0.0;
  if (!(in >> intercept)) throw InputError("model file: missing intercept");
  return LinearModel(std::move(beta), intercept);
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Regret-trained linear models for combinatorial problems",
               "dnl"};
  app.require_subcommand(1);

  DataOptions data;
  RunOptions run;
  std::string generate_out;
  std::vector<std::string> model_specs;

  auto* generate = app.add_subcommand("generate", "write a synthetic price CSV");
  generate->add_option("--days", data.days, "days (48 rows each by default)")
      ->check(CLI::PositiveNumber);
  generate->add_option("--features", data.features, "feature count")
      ->check(CLI::PositiveNumber);
  generate->add_option("--noise", data.noise, "noise sigma")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--group", data.group, "rows per day")
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", data.seed, "random seed");
  generate->add_option("--out", generate_out, "output CSV path")->required();

  auto* train = app.add_subcommand("train", "warmstart with ridge and train");
  AddDataOptions(train, data);
  AddRunOptions(train, run);
  train->add_option("--fold", run.fold, "fold to train on");

  auto* eval = app.add_subcommand("eval", "per-fold test regret table");
  AddDataOptions(eval, data);
  AddRunOptions(eval, run);
  eval->add_option("--model", model_specs, "NAME=PATH model file (repeatable)");

  auto* sweep = app.add_subcommand("sweep", "regret across capacities");
  AddDataOptions(sweep, data);
  AddRunOptions(sweep, run);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (generate->parsed()) return CmdGenerate(data, generate_out, out);
    if (train->parsed()) return CmdTrain(data, run, out, err);
    if (eval->parsed()) return CmdEval(data, run, model_specs, out, err);
    if (sweep->parsed()) return CmdSweep(data, run, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace dnl::cli
