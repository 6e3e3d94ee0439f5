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

// Transition-point extraction along one model parameter.
//
// The predicted optimal value is convex and piecewise linear in each model
// parameter, so three samples are collinear exactly when no transition point
// lies strictly between the outer two. Extraction samples the search region
// on a coarse uniform grid, keeps only the spans around non-collinear
// triples, and resamples those spans with a step shrunk by `shrink_factor`
// until the step reaches `min_step`.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dnl/core.hpp"
#include "dnl/oracle.hpp"

namespace dnl {

struct SearchSpec {
  double lower = -1.0;
  double upper = 1.0;
  int initial_points = 10;
  double shrink_factor = 10.0;
  double min_step = 0.01;
  double collinearity_tolerance = 1e-9;

  void Validate() const;
};

// Region [beta - 1.5|beta|, beta + 1.5|beta|] with min_step |beta| / 10.
// A zero parameter gets [-1, 1] and min_step 0.01.
SearchSpec SearchSpecAround(double beta);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double mid() const { return 0.5 * (low + high); }
  double width() const { return high - low; }
};

struct TransitionProfile {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Interval> intervals;  // sorted, disjoint
  std::uint64_t probe_count = 0;
  // Greedy extraction only: a probed parameter value just past the first
  // transition that improves the true objective over the old parameter.
  std::optional<double> improving_beta;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// True when the cross term of the triple is within
// tol * max(1, |y1|, |y2|, |y3|) * (x3 - x1). Requires a.x < b.x < c.x.
bool Collinear(Point a, Point b, Point c, double tol);

TransitionProfile ExtractFull(const LinearModel& model,
                              const ProblemSet& problem,
                              std::size_t beta_index, const SearchSpec& spec,
                              const Oracle& oracle);

// Localizes transition intervals nearest to `beta_old` first and stops at the
// first one beyond which the true objective strictly improves on its value at
// `beta_old`. Without such an interval the full profile is returned.
TransitionProfile ExtractGreedy(const LinearModel& model,
                                const ProblemSet& problem,
                                std::size_t beta_index, const SearchSpec& spec,
                                const Oracle& oracle, double beta_old);

}  // namespace dnl
