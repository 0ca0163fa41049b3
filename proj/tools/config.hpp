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

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sircap/errors.hpp"
#include "sircap/oracle.hpp"
#include "sircap/params.hpp"
#include "sircap/policy.hpp"

namespace sircap::cli {

// Bad config file or command line; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ScenarioConfig {
  EpidemicParams params;
  SolverOptions solver;
  std::size_t oracle_t2_count = 100;
  std::size_t oracle_mu_count = 100;
  std::size_t oracle_zoom_passes = 2;
  double oracle_gap_threshold = 0.1;
  std::string output_dir = "out";

  OracleOptions oracle_options(unsigned workers) const;
};

// Parses and validates one JSON document. Unknown keys, wrong types and
// invalid parameter combinations throw ConfigError; y0 >= cap_K throws
// InfeasibleError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Every field, defaults included.
nlohmann::ordered_json to_json(const ScenarioConfig& config);

// Rounds to 12 significant digits.
double round12(double value);
// %.12g, with "nan" / "inf" spelled out.
std::string fmt12(double value);
// round12 for finite values, null otherwise.
nlohmann::ordered_json num(double value);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file in the same directory and renames it.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string dump(const nlohmann::ordered_json& doc);

}  // namespace sircap::cli
