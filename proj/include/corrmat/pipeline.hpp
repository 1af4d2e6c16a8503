// Copyright 2026 The corrmat Authors.
//
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "corrmat/config.hpp"

namespace corrmat {

constexpr const char* kVersion = "0.1.0";

// Exit codes of a pipeline run.
enum ExitCode : int { kExitPass = 0, kExitError = 1, kExitCheckFailed = 2 };

const std::vector<std::string>& subcommands();
bool is_subcommand(std::string_view name);

struct RunOutcome {
  int exit_code = kExitError;
  std::string summary_json;
  std::string error;
  int error_status = 0;  // ErrorCode value on exit 1; -1 for internal failures
  std::vector<std::string> artifacts;
};

// Runs one subcommand and publishes its artifacts into config.output.dir.
// Errors are reported through the outcome (exit code 1) and leave no files.
RunOutcome run_experiment(std::string_view subcommand, const ExperimentConfig& config);

// Analytic semicircle Stieltjes transform (-z + sqrt(z^2 - 4)) / 2 on the
// branch with Im m > 0.
Complex semicircle_stieltjes(Complex z);

}  // namespace corrmat
