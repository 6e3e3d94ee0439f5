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

#include "dnl/transition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "dnl/regret.hpp"

namespace dnl {

void SearchSpec::Validate() const {
  if (!(lower < upper)) throw InputError("search region must have lower < upper");
  if (initial_points < 3) throw InputError("need at least 3 initial points");
  if (!(shrink_factor > 1.0)) throw InputError("shrink factor must exceed 1");
  if (!(min_step > 0.0)) throw InputError("min_step must be positive");
  if (!(collinearity_tolerance >= 0.0)) {
    throw InputError("collinearity tolerance must be nonnegative");
  }
}

SearchSpec SearchSpecAround(double beta) {
  SearchSpec spec;
  const double magnitude = std::abs(beta);
  if (magnitude < 1e-12) {
    spec.lower = -1.0;
    spec.upper = 1.0;
    spec.min_step = 0.01;
    return spec;
  }
  spec.lower = beta - 1.5 * magnitude;
  spec.upper = beta + 1.5 * magnitude;
  spec.min_step = magnitude / 10.0;
  return spec;
}

bool Collinear(Point a, Point b, Point c, double tol) {
  const double cross = (b.y - a.y) * (c.x - b.x) - (c.y - b.y) * (b.x - a.x);
  const double scale =
      std::max({1.0, std::abs(a.y), std::abs(b.y), std::abs(c.y)});
  return std::abs(cross) <= tol * scale * (c.x - a.x);
}

namespace {

// Memoized POV/TOV probes along one coordinate line.
class LineSampler {
 public:
  LineSampler(const LinearModel& model, const ProblemSet& problem,
              std::size_t beta_index, const Oracle& oracle)
      : line_(model, problem, beta_index), oracle_(oracle) {}

  const LineProbe& At(double beta) {
    auto it = cache_.find(beta);
    if (it == cache_.end()) {
      it = cache_.emplace(beta, ProbeLine(line_, beta, oracle_)).first;
      ++probes_;
    }
    return it->second;
  }

  std::uint64_t probes() const { return probes_; }

 private:
  CoordinateLine line_;
  const Oracle& oracle_;
  std::map<double, LineProbe> cache_;
  std::uint64_t probes_ = 0;
};

// Samples [span.low, span.high] with a step no larger than `step` and returns
// the merged spans around non-collinear triples.
std::vector<Interval> Subdivide(LineSampler& sampler, Interval span,
                                double step, double tol) {
  const double cells = std::ceil(span.width() / step - 1e-9);
  const int k = std::max(2, static_cast<int>(cells));
  std::vector<Point> points(k + 1);
  for (int j = 0; j <= k; ++j) {
    const double x =
        j == k ? span.high : span.low + span.width() * static_cast<double>(j) / k;
    points[j] = {x, sampler.At(x).pov};
  }
  std::vector<Interval> marked;
  for (int j = 0; j + 2 <= k; ++j) {
    if (Collinear(points[j], points[j + 1], points[j + 2], tol)) continue;
    const Interval hit{points[j].x, points[j + 2].x};
    if (!marked.empty() && hit.low < marked.back().high) {
      marked.back().high = hit.high;
    } else {
      marked.push_back(hit);
    }
  }
  return marked;
}

}  // namespace

TransitionProfile ExtractFull(const LinearModel& model,
                              const ProblemSet& problem,
                              std::size_t beta_index, const SearchSpec& spec,
                              const Oracle& oracle) {
  spec.Validate();
  LineSampler sampler(model, problem, beta_index, oracle);
  std::vector<Interval> spans{{spec.lower, spec.upper}};
  double step = (spec.upper - spec.lower) / (spec.initial_points - 1);
  while (true) {
    std::vector<Interval> next;
    for (const auto& span : spans) {
      auto found = Subdivide(sampler, span, step, spec.collinearity_tolerance);
      next.insert(next.end(), found.begin(), found.end());
    }
    spans = std::move(next);
    if (spans.empty() || step <= spec.min_step) break;
    step /= spec.shrink_factor;
  }
  TransitionProfile profile;
  profile.lower = spec.lower;
  profile.upper = spec.upper;
  profile.intervals = std::move(spans);
  profile.probe_count = sampler.probes();
  return profile;
}

TransitionProfile ExtractGreedy(const LinearModel& model,
                                const ProblemSet& problem,
                                std::size_t beta_index, const SearchSpec& spec,
                                const Oracle& oracle, double beta_old) {
  spec.Validate();
  if (beta_old < spec.lower || beta_old > spec.upper) {
    throw InputError("old parameter lies outside the search region");
  }
  LineSampler sampler(model, problem, beta_index, oracle);
  const double tov_old = sampler.At(beta_old).tov;

  struct Pending {
    Interval span;
    double step;  // sampling step that produced this span
    double distance;
  };
  auto distance = [beta_old](const Interval& s) {
    if (beta_old < s.low) return s.low - beta_old;
    if (beta_old > s.high) return beta_old - s.high;
    return 0.0;
  };
  auto farther = [](const Pending& a, const Pending& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return a.span.low > b.span.low;
  };
  std::priority_queue<Pending, std::vector<Pending>, decltype(farther)> queue(
      farther);

  const double initial_step =
      (spec.upper - spec.lower) / (spec.initial_points - 1);
  for (const auto& span :
       Subdivide(sampler, {spec.lower, spec.upper}, initial_step,
                 spec.collinearity_tolerance)) {
    queue.push({span, initial_step, distance(span)});
  }

  TransitionProfile profile;
  profile.lower = spec.lower;
  profile.upper = spec.upper;
  while (!queue.empty()) {
    const Pending top = queue.top();
    queue.pop();
    if (top.step <= spec.min_step) {
      // Endpoints are probed samples, so their true objective is known.
      const LineProbe& left = sampler.At(top.span.low);
      const LineProbe& right = sampler.At(top.span.high);
      const LineProbe& best = right.tov > left.tov ? right : left;
      if (best.tov > tov_old + kObjectiveTolerance) {
        profile.intervals = {top.span};
        profile.improving_beta = best.beta;
        profile.probe_count = sampler.probes();
        return profile;
      }
      profile.intervals.push_back(top.span);
      continue;
    }
    const double step = top.step / spec.shrink_factor;
    for (const auto& span :
         Subdivide(sampler, top.span, step, spec.collinearity_tolerance)) {
      queue.push({span, step, distance(span)});
    }
  }
  std::sort(profile.intervals.begin(), profile.intervals.end(),
            [](const Interval& a, const Interval& b) { return a.low < b.low; });
  profile.probe_count = sampler.probes();
  return profile;
}

}  // namespace dnl
