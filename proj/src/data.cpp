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

#include "dnl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "dnl/oracle.hpp"

namespace dnl {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    out.push_back(Trim(std::string_view(line).substr(
        begin, comma == std::string::npos ? std::string::npos : comma - begin)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

std::optional<double> ParseNumber(const std::string& field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string FormatDouble(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

void DropTrailing(RawSeries& series, std::ostream* warnings) {
  const std::size_t keep = series.groups() * series.group_size;
  series.dropped_rows = series.rows() - keep;
  if (series.dropped_rows == 0) return;
  series.prices.resize(keep);
  series.timestamps.resize(keep);
  series.features.resize(keep * series.feature_dim());
  if (warnings != nullptr) {
    *warnings << "warning: dropped " << series.dropped_rows
              << " trailing rows that do not fill a group of "
              << series.group_size << "\n";
  }
}

}  // namespace

RawSeries ParseCsv(std::istream& in, const CsvSchema& schema,
                   std::ostream* warnings) {
  if (schema.group_size == 0) throw InputError("group size must be positive");
  std::string line;
  if (!std::getline(in, line) || Trim(line).empty()) {
    throw InputError("empty CSV input: missing header row");
  }
  const auto header = SplitFields(line);
  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t price_col = column(schema.price_column);
  std::optional<std::size_t> time_col;
  if (std::find(header.begin(), header.end(), schema.timestamp_column) !=
      header.end()) {
    time_col = column(schema.timestamp_column);
  }

  RawSeries series;
  series.group_size = schema.group_size;
  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == price_col || (time_col && c == *time_col)) continue;
      feature_cols.push_back(c);
      series.feature_names.push_back(header[c]);
    }
  } else {
    for (const auto& name : schema.feature_columns) {
      feature_cols.push_back(column(name));
      series.feature_names.push_back(name);
    }
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitFields(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw InputError(where + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    const auto price = ParseNumber(fields[price_col]);
    if (!price) {
      throw InputError(where + ": non-numeric value '" + fields[price_col] +
                       "' in column '" + header[price_col] + "'");
    }
    for (std::size_t c : feature_cols) {
      const auto value = ParseNumber(fields[c]);
      if (!value) {
        throw InputError(where + ": non-numeric value '" + fields[c] +
                         "' in column '" + header[c] + "'");
      }
      series.features.push_back(*value);
    }
    series.prices.push_back(*price);
    series.timestamps.push_back(time_col ? fields[*time_col]
                                         : std::to_string(line_no - 1));
  }
  if (series.rows() == 0) throw InputError("CSV input has no data rows");
  DropTrailing(series, warnings);
  return series;
}

RawSeries LoadCsv(const std::string& path, const CsvSchema& schema,
                  std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ParseCsv(in, schema, warnings);
}

void WriteCsv(const RawSeries& series, std::ostream& out) {
  out << "timestamp";
  for (const auto& name : series.feature_names) out << ',' << name;
  out << ",price\n";
  for (std::size_t r = 0; r < series.rows(); ++r) {
    out << series.timestamps[r];
    for (double f : series.feature_row(r)) out << ',' << FormatDouble(f);
    out << ',' << FormatDouble(series.prices[r]) << '\n';
  }
}

RawSeries Synthesize(int num_days, int feature_dim, double noise_sigma,
                     std::uint64_t seed, std::size_t group_size) {
  if (num_days <= 0) throw InputError("number of days must be positive");
  if (feature_dim <= 0) throw InputError("feature dimension must be positive");
  if (!(noise_sigma >= 0.0)) throw InputError("noise sigma must be nonnegative");
  if (group_size == 0) throw InputError("group size must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  std::bernoulli_distribution positive(0.5);

  RawSeries series;
  series.group_size = group_size;
  HiddenMap hidden;
  for (int k = 0; k < feature_dim; ++k) {
    series.feature_names.push_back("f" + std::to_string(k));
    const double m = magnitude(rng);
    hidden.coefficients.push_back(positive(rng) ? m : -m);
  }
  hidden.intercept = 10.0;

  const std::size_t rows = static_cast<std::size_t>(num_days) * group_size;
  series.features.reserve(rows * feature_dim);
  for (std::size_t r = 0; r < rows; ++r) {
    double price = hidden.intercept;
    for (int k = 0; k < feature_dim; ++k) {
      const double f = gaussian(rng);
      series.features.push_back(f);
      price += hidden.coefficients[k] * f;
    }
    if (noise_sigma > 0.0) price += noise_sigma * gaussian(rng);
    series.prices.push_back(price);
    char stamp[64];
    std::snprintf(stamp, sizeof(stamp), "d%05zu-s%03zu", r / group_size,
                  r % group_size);
    series.timestamps.emplace_back(stamp);
  }
  series.hidden = std::move(hidden);
  return series;
}

Dataset MakeKnapsack(const RawSeries& series, bool weighted, double capacity,
                     std::uint64_t seed) {
  if (!(capacity > 0.0)) throw InputError("knapsack capacity must be positive");
  const std::size_t n = series.group_size;
  const std::size_t p = series.feature_dim();
  Dataset dataset;
  dataset.feature_dim = p + (weighted ? 1 : 0);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 2);
  constexpr double kWeights[] = {3.0, 5.0, 7.0};
  const auto unit = std::make_shared<const ConstraintData>(
      KnapsackConstraint{std::vector<double>(n, 1.0), capacity});

  for (std::size_t g = 0; g < series.groups(); ++g) {
    std::vector<double> values(n);
    std::vector<double> features;
    features.reserve(n * dataset.feature_dim);
    std::vector<double> weights(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = g * n + i;
      const auto row = series.feature_row(r);
      features.insert(features.end(), row.begin(), row.end());
      if (weighted) {
        weights[i] = kWeights[pick(rng)];
        features.push_back(weights[i]);
        values[i] = weights[i] * series.prices[r];
      } else {
        values[i] = series.prices[r];
      }
    }
    auto constraint =
        weighted ? std::make_shared<const ConstraintData>(
                       KnapsackConstraint{std::move(weights), capacity})
                 : unit;
    dataset.problem_sets.emplace_back("day" + std::to_string(g),
                                      std::move(values), std::move(features),
                                      dataset.feature_dim,
                                      std::move(constraint));
  }
  return dataset;
}

Dataset MakeScheduling(const RawSeries& series,
                       const SchedulingConstraint& load) {
  if (static_cast<std::size_t>(load.periods) != series.group_size) {
    throw InputError("scheduling horizon must equal the group size");
  }
  ValidateConstraint(load);
  const auto shared = std::make_shared<const ConstraintData>(load);
  const std::size_t n = series.group_size;
  Dataset dataset;
  dataset.feature_dim = series.feature_dim();
  for (std::size_t g = 0; g < series.groups(); ++g) {
    std::vector<double> prices(series.prices.begin() + g * n,
                               series.prices.begin() + (g + 1) * n);
    std::vector<double> features(
        series.features.begin() + g * n * dataset.feature_dim,
        series.features.begin() + (g + 1) * n * dataset.feature_dim);
    dataset.problem_sets.emplace_back("day" + std::to_string(g),
                                      std::move(prices), std::move(features),
                                      dataset.feature_dim, shared);
  }
  return dataset;
}

SchedulingConstraint GenerateLoad(int machines, int jobs, int periods,
                                  std::uint64_t seed) {
  if (machines <= 0 || jobs < 0 || periods <= 0) {
    throw InputError("load needs machines > 0, jobs >= 0 and periods > 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> capacity(2, 3);
  std::uniform_int_distribution<int> resource(1, 2);
  std::uniform_int_distribution<int> power(1, 3);
  std::uniform_int_distribution<int> duration(1, std::max(1, periods / 4));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    SchedulingConstraint load;
    load.periods = periods;
    for (int m = 0; m < machines; ++m) {
      load.machines.push_back({static_cast<double>(capacity(rng))});
    }
    for (int j = 0; j < jobs; ++j) {
      JobSpec job;
      job.resource = resource(rng);
      job.power = power(rng);
      job.duration = duration(rng);
      std::uniform_int_distribution<int> start(0, periods - job.duration);
      job.earliest_start = start(rng);
      std::uniform_int_distribution<int> slack(0, std::max(0, periods / 2));
      job.latest_finish = std::min(
          periods, job.earliest_start + job.duration + slack(rng));
      load.jobs.push_back(job);
    }
    try {
      SolveScheduling(std::vector<double>(periods, 1.0), load);
      return load;
    } catch (const SolverError&) {
      continue;
    }
  }
  throw InputError("could not generate a feasible scheduling load");
}

void SplitSpec::Validate() const {
  if (folds < 1) throw InputError("need at least one fold");
  if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0 ||
      std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw InputError("split fractions must be nonnegative and sum to 1");
  }
}

std::vector<FoldSplit> Split(std::size_t problem_count, const SplitSpec& spec) {
  spec.Validate();
  const std::size_t n = problem_count;
  const auto folds = static_cast<std::size_t>(spec.folds);
  const auto val_count =
      static_cast<std::size_t>(std::lround(spec.val_frac * static_cast<double>(n)));
  std::vector<FoldSplit> out;
  for (std::size_t f = 0; f < folds; ++f) {
    std::size_t test_begin = 0;
    std::size_t test_end = 0;
    if (folds == 1) {
      test_end = n;
      test_begin = n - std::min<std::size_t>(
                           n, static_cast<std::size_t>(std::lround(
                                  spec.test_frac * static_cast<double>(n))));
    } else {
      test_begin = f * n / folds;
      test_end = (f + 1) * n / folds;
    }
    const std::size_t test_count = test_end - test_begin;
    if (test_count == 0 || test_count + val_count >= n) {
      throw InputError("too few problem sets for the requested split");
    }
    FoldSplit split;
    for (std::size_t i = test_begin; i < test_end; ++i) split.test.push_back(i);
    // Walk backwards (cyclically) from the test block: validation first,
    // then training, so every split stays contiguous in time.
    const std::size_t rest = n - test_count;
    std::vector<std::size_t> before;
    before.reserve(rest);
    for (std::size_t j = 1; j <= rest; ++j) {
      before.push_back((test_begin + n - j) % n);
    }
    split.validation.assign(before.begin(), before.begin() + val_count);
    split.train.assign(before.begin() + val_count, before.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.train.begin(), split.train.end());
    out.push_back(std::move(split));
  }
  return out;
}

std::vector<ProblemSet> Subset(std::span<const ProblemSet> problems,
                               std::span<const std::size_t> indices) {
  std::vector<ProblemSet> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(problems[i]);
  return out;
}

void WriteDataset(const Dataset& dataset, std::ostream& out) {
  const bool knapsack =
      dataset.problem_sets.empty() ||
      IsKnapsack(dataset.problem_sets.front().constraint());
  out << "dnl-dataset 1\n";
  out << "family " << (knapsack ? "knapsack" : "scheduling") << '\n';
  out << "feature_dim " << dataset.feature_dim << '\n';
  out << "problems " << dataset.problem_sets.size() << '\n';
  for (const auto& problem : dataset.problem_sets) {
    if (problem.id().find_first_of(" \t\n") != std::string::npos) {
      throw InputError("problem ids must not contain whitespace");
    }
    out << "problem " << problem.id() << ' ' << problem.size() << '\n';
    if (const auto* k = std::get_if<KnapsackConstraint>(&problem.constraint())) {
      out << "knapsack " << FormatDouble(k->capacity);
      for (double w : k->weights) out << ' ' << FormatDouble(w);
      out << '\n';
    } else {
      const auto& s = std::get<SchedulingConstraint>(problem.constraint());
      out << "periods " << s.periods << '\n';
      out << "machines " << s.machines.size();
      for (const auto& m : s.machines) out << ' ' << FormatDouble(m.capacity);
      out << '\n';
      for (const auto& j : s.jobs) {
        out << "job " << FormatDouble(j.resource) << ' '
            << FormatDouble(j.power) << ' ' << j.duration << ' '
            << j.earliest_start << ' ' << j.latest_finish << '\n';
      }
    }
    for (std::size_t i = 0; i < problem.size(); ++i) {
      out << "row " << FormatDouble(problem.true_values()[i]);
      for (double f : problem.feature_row(i)) out << ' ' << FormatDouble(f);
      out << '\n';
    }
    out << "end\n";
  }
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::pair<std::string, std::istringstream> Next() {
    std::string line;
    while (true) {
      if (!std::getline(in_, line)) Fail("unexpected end of dataset");
      ++line_no_;
      if (!Trim(line).empty()) break;
    }
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    return {head, std::move(fields)};
  }

  std::istringstream Line(const std::string& keyword) {
    auto [head, fields] = Next();
    if (head != keyword) Fail("expected '" + keyword + "', found '" + head + "'");
    return std::move(fields);
  }

  template <class T>
  T Read(std::istringstream& fields, const char* what) {
    std::string token;
    if (!(fields >> token)) Fail(std::string("missing ") + what);
    if constexpr (std::is_same_v<T, std::string>) {
      return token;
    } else if constexpr (std::is_floating_point_v<T>) {
      const auto value = ParseNumber(token);
      if (!value) Fail(std::string("bad number for ") + what);
      return *value;
    } else {
      T value{};
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        Fail(std::string("bad integer for ") + what);
      }
      return value;
    }
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw InputError("dataset line " + std::to_string(line_no_) + ": " +
                     message);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

Dataset ReadDataset(std::istream& in) {
  TokenReader reader(in);
  {
    auto magic = reader.Line("dnl-dataset");
    if (reader.Read<int>(magic, "version") != 1) {
      reader.Fail("unsupported dataset version");
    }
  }
  auto family_line = reader.Line("family");
  const auto family = reader.Read<std::string>(family_line, "family");
  if (family != "knapsack" && family != "scheduling") {
    reader.Fail("unknown family '" + family + "'");
  }
  Dataset dataset;
  auto dim_line = reader.Line("feature_dim");
  dataset.feature_dim = reader.Read<std::size_t>(dim_line, "feature_dim");
  auto count_line = reader.Line("problems");
  const auto count = reader.Read<std::size_t>(count_line, "problems");

  std::shared_ptr<const ConstraintData> previous;
  for (std::size_t q = 0; q < count; ++q) {
    auto head = reader.Line("problem");
    const auto id = reader.Read<std::string>(head, "id");
    const auto n = reader.Read<std::size_t>(head, "coefficient count");
    ConstraintData constraint;
    if (family == "knapsack") {
      auto line = reader.Line("knapsack");
      KnapsackConstraint k;
      k.capacity = reader.Read<double>(line, "capacity");
      for (std::size_t i = 0; i < n; ++i) {
        k.weights.push_back(reader.Read<double>(line, "weight"));
      }
      constraint = std::move(k);
    } else {
      SchedulingConstraint s;
      auto periods = reader.Line("periods");
      s.periods = reader.Read<int>(periods, "periods");
      auto machines = reader.Line("machines");
      const auto m = reader.Read<std::size_t>(machines, "machine count");
      for (std::size_t i = 0; i < m; ++i) {
        s.machines.push_back({reader.Read<double>(machines, "capacity")});
      }
      constraint = std::move(s);
    }
    std::vector<double> values;
    std::vector<double> features;
    // Job lines (scheduling only) precede the rows.
    auto* sched = std::get_if<SchedulingConstraint>(&constraint);
    while (true) {
      auto [keyword, fields] = reader.Next();
      if (keyword == "job" && sched != nullptr) {
        JobSpec job;
        job.resource = reader.Read<double>(fields, "resource");
        job.power = reader.Read<double>(fields, "power");
        job.duration = reader.Read<int>(fields, "duration");
        job.earliest_start = reader.Read<int>(fields, "earliest start");
        job.latest_finish = reader.Read<int>(fields, "latest finish");
        sched->jobs.push_back(job);
      } else if (keyword == "row") {
        values.push_back(reader.Read<double>(fields, "value"));
        for (std::size_t k = 0; k < dataset.feature_dim; ++k) {
          features.push_back(reader.Read<double>(fields, "feature"));
        }
      } else if (keyword == "end") {
        break;
      } else {
        reader.Fail("unexpected keyword '" + keyword + "'");
      }
    }
    if (values.size() != n) reader.Fail("problem " + id + ": row count mismatch");

    std::shared_ptr<const ConstraintData> shared;
    if (previous && family == "scheduling" &&
        [&] {
          const auto& a = std::get<SchedulingConstraint>(*previous);
          const auto& b = std::get<SchedulingConstraint>(constraint);
          if (a.periods != b.periods || a.machines.size() != b.machines.size() ||
              a.jobs.size() != b.jobs.size()) {
            return false;
          }
          for (std::size_t i = 0; i < a.machines.size(); ++i) {
            if (a.machines[i].capacity != b.machines[i].capacity) return false;
          }
          for (std::size_t i = 0; i < a.jobs.size(); ++i) {
            const auto& x = a.jobs[i];
            const auto& y = b.jobs[i];
            if (x.resource != y.resource || x.power != y.power ||
                x.duration != y.duration ||
                x.earliest_start != y.earliest_start ||
                x.latest_finish != y.latest_finish) {
              return false;
            }
          }
          return true;
        }()) {
      shared = previous;
    } else {
      shared = std::make_shared<const ConstraintData>(std::move(constraint));
    }
    dataset.problem_sets.emplace_back(id, std::move(values), std::move(features),
                                      dataset.feature_dim, shared);
    previous = shared;
  }
  ValidateDataset(dataset);
  return dataset;
}

}  // namespace dnl
