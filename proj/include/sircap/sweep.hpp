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

#include <optional>
#include <string>
#include <vector>

#include "sircap/oracle.hpp"
#include "sircap/params.hpp"
#include "sircap/policy.hpp"

namespace sircap {

struct SweepRow {
  double tau = 0.0;
  std::optional<PolicyCase> case_label;  // nullopt: the solve failed
  std::string error;
  double t1 = 0.0, t2 = 0.0, mu = 0.0, x_inf = 0.0;
  std::optional<double> oracle_t2, oracle_mu, oracle_x_inf;
  bool pmp_ok = false;
  bool feasible = false;
};

struct CaseTransition {
  PolicyCase from;
  PolicyCase to;
  double tau = 0.0;  // midpoint of the final bracket
  double bracket = 0.0;
};

struct SweepOptions {
  SolverOptions solver;
  unsigned workers = 1;
  bool with_oracle = false;
  OracleOptions oracle;
  double transition_tol = 1e-3;
};

// tau_from, tau_from + tau_step, ... up to tau_to (inclusive to 1e-9).
std::vector<double> tau_lattice(double tau_from, double tau_to, double tau_step);

// One solve per tau; rows keep the order of `taus`.
std::vector<SweepRow> sweep_tau(const EpidemicParams& base, const std::vector<double>& taus,
                                const SweepOptions& opts);

// Case changes between consecutive successful rows, each refined by bisection
// in tau down to opts.transition_tol.
std::vector<CaseTransition> find_transitions(const EpidemicParams& base, const std::vector<SweepRow>& rows,
                                             const SweepOptions& opts);

}  // namespace sircap
