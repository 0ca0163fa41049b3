// Copyright 2026 The sircap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"

namespace sircap::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInfeasible = 3, kNumerical = 4 };

struct RunFlags {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  unsigned workers = 1;
  std::optional<double> step;
};

struct SweepFlags {
  double tau_from = 0.0;
  double tau_to = 155.0;
  double tau_step = 1.0;
  bool with_oracle = false;
};

int cmd_solve(const RunFlags& flags);
int cmd_sweep_tau(const RunFlags& flags, const SweepFlags& sweep);
int cmd_oracle(const RunFlags& flags);
int cmd_verify_pmp(const RunFlags& flags, const std::filesystem::path& policy);

// Loads the config and applies --step; errors surface before any output
// directory is created.
ScenarioConfig resolve_config(const RunFlags& flags);

}  // namespace sircap::cli
