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

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "commands.hpp"
#include "sircap/errors.hpp"

namespace {

using namespace sircap::cli;

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "scenario config (JSON)")->required();
  cmd->add_option("--out", flags.out, "output directory (overrides output_dir)");
  cmd->add_option("--workers", flags.workers, "worker threads")->default_val(1);
  cmd->add_option("--step", flags.step, "RK4 step (overrides step)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal lockdown schedules for a capped SIR epidemic"};
  app.require_subcommand(1);
  RunFlags flags;
  SweepFlags sweep;
  std::filesystem::path policy;

  CLI::App* solve = app.add_subcommand("solve", "solve one scenario");
  add_run_flags(solve, flags);
  CLI::App* sweep_cmd = app.add_subcommand("sweep-tau", "solve over a range of tau");
  add_run_flags(sweep_cmd, flags);
  sweep_cmd->add_option("--tau-from", sweep.tau_from, "first tau")->default_val(0.0);
  sweep_cmd->add_option("--tau-to", sweep.tau_to, "last tau (inclusive)")->default_val(155.0);
  sweep_cmd->add_option("--tau-step", sweep.tau_step, "tau spacing")->default_val(1.0);
  sweep_cmd->add_flag("--with-oracle", sweep.with_oracle, "also run the grid search per tau (slow)");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force grid search and comparison");
  add_run_flags(oracle, flags);
  CLI::App* verify = app.add_subcommand("verify-pmp", "check the maximum-principle structure of a policy");
  add_run_flags(verify, flags);
  verify->add_option("--policy", policy, "policy.json from solve")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(flags);
    if (*sweep_cmd) return cmd_sweep_tau(flags, sweep);
    if (*oracle) return cmd_oracle(flags);
    if (*verify) return cmd_verify_pmp(flags, policy);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const sircap::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const sircap::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  }
  return kUsage;
}
