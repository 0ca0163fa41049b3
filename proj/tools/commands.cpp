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

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "sircap/constrained.hpp"
#include "sircap/dynamics.hpp"
#include "sircap/oracle.hpp"
#include "sircap/pmp.hpp"
#include "sircap/sweep.hpp"

namespace sircap::cli {
namespace {

namespace fs = std::filesystem;
using OJson = nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.1.0";

fs::path output_dir(const RunFlags& flags, const ScenarioConfig& config) {
  const fs::path dir = flags.out ? *flags.out : fs::path(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_metadata(const fs::path& dir, const std::string& command, const ScenarioConfig& config,
                    const RunFlags& flags, OJson extra = OJson::object()) {
  OJson meta;
  meta["tool"] = "sircap";
  meta["version"] = kToolVersion;
  meta["command"] = command;
  meta["config"] = to_json(config);
  meta["workers"] = flags.workers;
  for (auto& [k, v] : extra.items()) meta[k] = v;
  write_file(dir / "metadata.json", dump(meta));
}

OJson report_json(const PmpReport& r) {
  OJson j;
  j["passed"] = r.passed();
  j["beta"] = num(r.beta);
  j["beta_estimated"] = true;
  j["phi_scale"] = num(r.phi_scale);
  j["jump_nu"] = num(r.jump_nu);
  OJson checks = OJson::array();
  for (const ConditionCheck& c : r.checks) {
    OJson e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["worst"] = num(c.worst);
    e["tolerance"] = num(c.tolerance);
    e["first_violation_t"] = c.first_violation ? num(*c.first_violation) : OJson(nullptr);
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["notes"] = r.notes;
  return j;
}

OJson policy_json(const ConstrainedPolicy& c, const Trajectory& tr, const EpidemicParams& params,
                  const PmpReport& pmp) {
  OJson j;
  j["case"] = std::string(to_string(c.case_label));
  j["t1"] = num(c.t1);
  j["t2"] = num(c.t2);
  j["mu"] = num(c.mu);
  j["x_inf"] = num(c.x_inf_achieved);
  j["feasible"] = c.hypotheses.feasible;
  j["verified"] = c.hypotheses.verified() && pmp.passed();
  OJson h;
  h["exit_above_herd"] = c.hypotheses.exit_above_herd;
  h["terminal_below_cap"] = c.hypotheses.terminal_below_cap;
  h["feasible"] = c.hypotheses.feasible;
  h["arc_sigma_in_range"] = c.hypotheses.arc_sigma_in_range;
  h["notes"] = c.hypotheses.notes;
  j["hypotheses"] = h;
  if (c.geometry) {
    OJson g;
    g["t_b"] = num(c.geometry->t_b);
    g["t_m"] = num(c.geometry->t_m);
    g["t_f"] = num(c.geometry->t_f);
    g["t_c"] = num(c.geometry->t_c);
    g["w_b_at_t_c"] = num(c.wb_at_tc);
    j["geometry"] = g;
  } else {
    j["geometry"] = nullptr;
  }
  OJson u;
  u["case"] = std::string(to_string(c.unconstrained.case_label));
  u["t0"] = num(c.unconstrained.t0);
  u["mu0"] = num(c.unconstrained.mu0);
  u["x_inf"] = num(c.unconstrained.x_inf_achieved);
  u["peak_t"] = num(c.unconstrained_peak.t_peak);
  u["peak_y"] = num(c.unconstrained_peak.y_max);
  j["unconstrained"] = u;
  OJson path;
  path["max_y"] = num(tr.max_infected());
  path["v_T"] = num(tr.terminal()(2));
  path["budget"] = num(params.budget());
  j["trajectory"] = path;
  j["pmp"] = report_json(pmp);
  return j;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,x,y,v,sigma\n";
  out.reserve(static_cast<std::size_t>(tr.size()) * 80);
  for (Eigen::Index i = 0; i < tr.size(); ++i) {
    out += fmt12(tr.t(i)) + ',' + fmt12(tr.states(0, i)) + ',' + fmt12(tr.states(1, i)) + ',' +
           fmt12(tr.states(2, i)) + ',' + fmt12(tr.sigma(i)) + '\n';
  }
  return out;
}

std::string opt12(const std::optional<double>& v) { return v ? fmt12(*v) : std::string(); }

}  // namespace

ScenarioConfig resolve_config(const RunFlags& flags) {
  ScenarioConfig config = load_config(flags.config);
  if (flags.step) {
    if (!(*flags.step > 0.0)) throw ConfigError("--step must be > 0");
    config.solver.step = *flags.step;
  }
  if (flags.workers == 0) throw ConfigError("--workers must be >= 1");
  return config;
}

int cmd_solve(const RunFlags& flags) {
  const ScenarioConfig config = resolve_config(flags);
  const ConstrainedPolicy c = solve_constrained(config.params, config.solver);
  const Trajectory tr = integrate(config.params, c.schedule, config.solver.step);
  const PmpReport pmp = verify_pmp(config.params, c, config.solver);
  const fs::path dir = output_dir(flags, config);
  write_file(dir / "policy.json", dump(policy_json(c, tr, config.params, pmp)));
  write_file(dir / "trajectory.csv", trajectory_csv(tr));
  write_metadata(dir, "solve", config, flags);
  return c.hypotheses.feasible ? kOk : kInfeasible;
}

int cmd_sweep_tau(const RunFlags& flags, const SweepFlags& sweep) {
  const ScenarioConfig config = resolve_config(flags);
  if (!std::isfinite(sweep.tau_from) || !std::isfinite(sweep.tau_to)) throw ConfigError("tau range must be finite");
  if (!(sweep.tau_step > 0.0)) throw ConfigError("--tau-step must be > 0");
  SweepOptions opts;
  opts.solver = config.solver;
  opts.workers = flags.workers;
  opts.with_oracle = sweep.with_oracle;
  opts.oracle = config.oracle_options(1);
  const std::vector<SweepRow> rows = sweep_tau(config.params, tau_lattice(sweep.tau_from, sweep.tau_to, sweep.tau_step), opts);
  const std::vector<CaseTransition> transitions = find_transitions(config.params, rows, opts);

  std::string csv = "tau,case,t1,t2,mu,x_inf,oracle_t2,oracle_mu,pmp_ok\n";
  OJson flagged = OJson::array(), failed = OJson::array(), infeasible = OJson::array();
  for (const SweepRow& r : rows) {
    if (!r.case_label) {
      csv += fmt12(r.tau) + ",error,,,,,,,0\n";
      OJson f;
      f["tau"] = num(r.tau);
      f["error"] = r.error;
      failed.push_back(f);
      continue;
    }
    csv += fmt12(r.tau) + ',' + std::string(to_string(*r.case_label)) + ',' + fmt12(r.t1) + ',' + fmt12(r.t2) +
           ',' + fmt12(r.mu) + ',' + fmt12(r.x_inf) + ',' + opt12(r.oracle_t2) + ',' + opt12(r.oracle_mu) + ',' +
           (r.pmp_ok ? "1" : "0") + '\n';
    if (!r.feasible) infeasible.push_back(num(r.tau));
    if (r.oracle_t2) {
      const double gap = std::max(std::abs(*r.oracle_t2 - r.t2), std::abs(*r.oracle_mu - r.mu));
      if (gap > config.oracle_gap_threshold) {
        OJson f;
        f["tau"] = num(r.tau);
        f["gap"] = num(gap);
        flagged.push_back(f);
      }
    }
  }
  OJson b;
  OJson tj = OJson::array();
  for (const CaseTransition& t : transitions) {
    OJson e;
    e["from"] = std::string(to_string(t.from));
    e["to"] = std::string(to_string(t.to));
    e["tau"] = num(t.tau);
    e["bracket"] = num(t.bracket);
    tj.push_back(e);
  }
  b["transitions"] = tj;
  b["oracle_gap_threshold"] = num(config.oracle_gap_threshold);
  b["oracle_gap_flags"] = flagged;
  b["infeasible_tau"] = infeasible;
  b["failed"] = failed;

  const fs::path dir = output_dir(flags, config);
  write_file(dir / "sweep.csv", csv);
  write_file(dir / "boundaries.json", dump(b));
  OJson extra;
  extra["tau_from"] = num(sweep.tau_from);
  extra["tau_to"] = num(sweep.tau_to);
  extra["tau_step"] = num(sweep.tau_step);
  extra["with_oracle"] = sweep.with_oracle;
  write_metadata(dir, "sweep-tau", config, flags, extra);
  return kOk;
}

int cmd_oracle(const RunFlags& flags) {
  const ScenarioConfig config = resolve_config(flags);
  const ConstrainedPolicy c = solve_constrained(config.params, config.solver);
  const OracleResult r = grid_search(config.params, config.oracle_options(flags.workers));

  std::string csv = "t2,mu,x_inf,feasible\n";
  for (const SearchGrid& g : r.passes) {
    for (const SurfacePoint& p : g.results) {
      csv += fmt12(p.t2) + ',' + fmt12(p.mu) + ',' + fmt12(p.x_inf) + ',' + (p.feasible ? "1" : "0") + '\n';
    }
  }
  OJson j;
  OJson th;
  th["case"] = std::string(to_string(c.case_label));
  th["t1"] = num(c.t1);
  th["t2"] = num(c.t2);
  th["mu"] = num(c.mu);
  th["x_inf"] = num(c.x_inf_achieved);
  j["closed_form"] = th;
  OJson o;
  o["t_hit"] = r.t_hit ? num(*r.t_hit) : OJson(nullptr);
  o["t2"] = num(r.best.t2);
  o["mu"] = num(r.best.mu);
  o["x_inf"] = num(r.best.x_inf);
  o["t2_spacing"] = num(r.t2_spacing);
  o["mu_spacing"] = num(r.mu_spacing);
  o["passes"] = r.passes.size();
  o["surface_rows"] = r.surface_size();
  j["oracle"] = o;
  OJson gaps;
  const double gt2 = std::abs(r.best.t2 - c.t2), gmu = std::abs(r.best.mu - c.mu);
  gaps["t2"] = num(gt2);
  gaps["mu"] = num(gmu);
  gaps["x_inf"] = num(std::abs(r.best.x_inf - c.x_inf_achieved));
  j["gaps"] = gaps;
  j["gap_threshold"] = num(config.oracle_gap_threshold);
  j["within_threshold"] = gt2 <= config.oracle_gap_threshold && gmu <= config.oracle_gap_threshold;

  const fs::path dir = output_dir(flags, config);
  write_file(dir / "surface.csv", csv);
  write_file(dir / "comparison.json", dump(j));
  write_metadata(dir, "oracle", config, flags);
  return kOk;
}

int cmd_verify_pmp(const RunFlags& flags, const fs::path& policy_path) {
  const ScenarioConfig config = resolve_config(flags);
  nlohmann::json policy;
  try {
    policy = nlohmann::json::parse(read_file(policy_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("policy: malformed JSON: ") + e.what());
  }
  PolicyTimes times;
  for (auto [key, field] : {std::pair{"t1", &times.t1}, std::pair{"t2", &times.t2}, std::pair{"mu", &times.mu}}) {
    if (!policy.is_object() || !policy.contains(key) || !policy[key].is_number()) {
      throw ConfigError(std::string("policy: missing numeric '") + key + "'");
    }
    *field = policy[key].get<double>();
  }
  OJson j;
  if (policy.contains("case") && policy["case"].is_string()) j["case"] = policy["case"];
  const OJson report = report_json(verify_pmp(config.params, times, config.solver));
  for (auto& [k, v] : report.items()) j[k] = v;

  const fs::path dir = output_dir(flags, config);
  write_file(dir / "pmp_report.json", dump(j));
  OJson extra;
  extra["policy"] = policy_path.string();
  write_metadata(dir, "verify-pmp", config, flags, extra);
  return kOk;
}

}  // namespace sircap::cli
