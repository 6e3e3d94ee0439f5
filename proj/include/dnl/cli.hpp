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

// Experiment harness behind the `dnl` command-line tool.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dnl/core.hpp"

namespace dnl::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kRuntimeFailure = 2 };

// Runs `dnl <subcommand> [flags]`; returns the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Model text format: line 1 is p, line 2 the p coefficients separated by
// spaces, line 3 the intercept.
void WriteModel(const LinearModel& model, std::ostream& out);
LinearModel ReadModel(std::istream& in);

}  // namespace dnl::cli
