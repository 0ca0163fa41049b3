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

#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sircap::cli {
namespace {

using Json = nlohmann::json;

double get_number(const Json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const Json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw ConfigError("config: '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

OracleOptions ScenarioConfig::oracle_options(unsigned workers) const {
  OracleOptions o;
  o.t2_count = oracle_t2_count;
  o.mu_count = oracle_mu_count;
  o.zoom_passes = oracle_zoom_passes;
  o.workers = workers;
  o.solver = solver;
  return o;
}

ScenarioConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  ScenarioConfig c;
  EpidemicParams& p = c.params;
  for (const auto& [key, v] : doc.items()) {
    if (key == "gamma") p.gamma = get_number(v, key);
    else if (key == "sigma_s") p.sigma_s = get_number(v, key);
    else if (key == "sigma_f") p.sigma_f = get_number(v, key);
    else if (key == "horizon_T") p.horizon_T = get_number(v, key);
    else if (key == "tau") p.tau = get_number(v, key);
    else if (key == "cap_K") p.cap_K = get_number(v, key);
    else if (key == "x0") p.x0 = get_number(v, key);
    else if (key == "y0") p.y0 = get_number(v, key);
    else if (key == "step") c.solver.step = get_number(v, key);
    else if (key == "event_tol") c.solver.event_tol = get_number(v, key);
    else if (key == "root_tol") c.solver.root_tol = get_number(v, key);
    else if (key == "oracle_t2_count") c.oracle_t2_count = get_count(v, key);
    else if (key == "oracle_mu_count") c.oracle_mu_count = get_count(v, key);
    else if (key == "oracle_zoom_passes") c.oracle_zoom_passes = get_count(v, key);
    else if (key == "oracle_gap_threshold") c.oracle_gap_threshold = get_number(v, key);
    else if (key == "output_dir") {
      if (!v.is_string()) throw ConfigError("config: 'output_dir' must be a string");
      c.output_dir = v.get<std::string>();
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (!(c.solver.step > 0.0)) throw ConfigError("config: step must be > 0");
  if (!(c.solver.event_tol > 0.0)) throw ConfigError("config: event_tol must be > 0");
  if (!(c.solver.root_tol > 0.0)) throw ConfigError("config: root_tol must be > 0");
  if (c.oracle_t2_count < 50 || c.oracle_mu_count < 50) {
    throw ConfigError("config: oracle resolution must be at least 50 x 50");
  }
  if (!(c.oracle_gap_threshold > 0.0)) throw ConfigError("config: oracle_gap_threshold must be > 0");
  try {
    validate(p);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  const EpidemicParams& p = c.params;
  nlohmann::ordered_json j;
  j["gamma"] = num(p.gamma);
  j["sigma_s"] = num(p.sigma_s);
  j["sigma_f"] = num(p.sigma_f);
  j["horizon_T"] = num(p.horizon_T);
  j["tau"] = num(p.tau);
  j["cap_K"] = num(p.cap_K);
  j["x0"] = num(p.x0);
  j["y0"] = num(p.y0);
  j["step"] = num(c.solver.step);
  j["event_tol"] = num(c.solver.event_tol);
  j["root_tol"] = num(c.solver.root_tol);
  j["oracle_t2_count"] = c.oracle_t2_count;
  j["oracle_mu_count"] = c.oracle_mu_count;
  j["oracle_zoom_passes"] = c.oracle_zoom_passes;
  j["oracle_gap_threshold"] = num(c.oracle_gap_threshold);
  j["output_dir"] = c.output_dir;
  return j;
}

double round12(double value) {
  if (!std::isfinite(value)) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

std::string fmt12(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

nlohmann::ordered_json num(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round12(value);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace sircap::cli
