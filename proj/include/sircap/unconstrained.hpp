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

#include "sircap/params.hpp"
#include "sircap/policy.hpp"

namespace sircap {

// Optimal single strict-quarantine interval (t0, t0 + mu0] when the hospital
// cap is ignored.
struct UnconstrainedPolicy {
  double t0 = 0.0;
  double mu0 = 0.0;
  PolicyCase case_label = PolicyCase::k1_1;
  double x_inf_achieved = 0.0;
};

// Duration of the strict phase that starts at t: tau, or T - t near the end.
double lockdown_length(const EpidemicParams& params, double t);

// Switching indicator: integral of (sigma_f x - 1) / y over the strict phase
// starting at t, along the trajectory of single_lockdown(t, lockdown_length(t)).
double w_function(double t, const EpidemicParams& params, const SolverOptions& opts = {});

// 1 / (gamma y(t)) for the free-running prefix; defined for T - tau <= t <= T.
double alpha_function(double t, const EpidemicParams& params, const SolverOptions& opts = {});

UnconstrainedPolicy solve_unconstrained(const EpidemicParams& params,
                                        const SolverOptions& opts = {});

ControlSchedule schedule_of(const EpidemicParams& params, const UnconstrainedPolicy& policy);

struct InfectedPeak {
  double t_peak = 0.0;
  double y_max = 0.0;
};

// Maximum of y over [0, T] along the unconstrained optimum.
InfectedPeak unconstrained_peak(const EpidemicParams& params, const UnconstrainedPolicy& policy,
                                const SolverOptions& opts = {});
InfectedPeak unconstrained_peak(const EpidemicParams& params, const SolverOptions& opts = {});

}  // namespace sircap
