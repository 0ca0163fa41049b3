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

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "sircap/constrained.hpp"
#include "sircap/control.hpp"
#include "sircap/dynamics.hpp"
#include "sircap/params.hpp"
#include "sircap/policy.hpp"

namespace sircap {

// Switching times of a policy sigma[t1, t2, mu]; t1 == t2 when there is no
// boundary arc.
struct PolicyTimes {
  double t1 = 0.0;
  double t2 = 0.0;
  double mu = 0.0;
  bool has_arc() const { return t2 > t1; }
};

// Costates on the forward mesh, integrated backwards from T with lambda0 = 1.
//   lambda1' = (lambda1 - lambda2) gamma sigma y
//   lambda2' = (lambda1 - lambda2) gamma sigma x + gamma lambda2 + eta
// with eta = -gamma lambda1 on boundary arcs and 0 elsewhere.
struct AdjointPath {
  Eigen::VectorXd t, lambda1, lambda2, phi, eta, sigma, hamiltonian;
  double beta = 0.0;     // multiplier of the budget (constant lambda3)
  double lambda0 = 1.0;
  double jump_nu = 0.0;  // lambda2 jump needed at the arc entry
  bool beta_from_arc = false;
  std::vector<std::string> notes;
};

AdjointPath integrate_adjoint(const EpidemicParams& params, const Trajectory& forward,
                              const PolicyTimes& times);

struct ConditionCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;      // largest violation magnitude seen (or the measured value)
  double tolerance = 0.0;
  std::optional<double> first_violation;
};

struct PmpReport {
  std::vector<ConditionCheck> checks;
  std::vector<std::string> notes;
  double beta = 0.0;
  double phi_scale = 0.0;  // max |phi|
  double jump_nu = 0.0;
  bool passed() const;
};

PmpReport check_switching_structure(const EpidemicParams& params, const Trajectory& forward,
                                    const AdjointPath& adjoint, const PolicyTimes& times);

// Forward run, adjoint and checks for a solved policy.
PmpReport verify_pmp(const EpidemicParams& params, const ConstrainedPolicy& policy,
                     const SolverOptions& opts = {});
PmpReport verify_pmp(const EpidemicParams& params, const PolicyTimes& times,
                     const SolverOptions& opts = {});

// sigma[t1, t2, mu] with the arc (if any) entered from the sigma_f run at t1.
ControlSchedule schedule_for(const EpidemicParams& params, const PolicyTimes& times, double step);

}  // namespace sircap
