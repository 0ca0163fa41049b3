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

#include "sircap/control.hpp"
#include "sircap/dynamics.hpp"
#include "sircap/params.hpp"
#include "sircap/policy.hpp"
#include "sircap/unconstrained.hpp"

namespace sircap {

// Characteristic times of the boundary-arc problem once t1* = t_b is fixed.
//   t_m: x reaches 1/sigma_f along the arc (capped at T)
//   t_f: last t2 in [t_b, t_m] with F(t2) >= 0
//   t_c: where the budget bound F(t2) meets the horizon bound T - t2
struct RegionGeometry {
  double t_b = 0.0;
  State entry_state = State::Zero();  // state at t_b, (x_b, ~K, v_b)
  double t_m = 0.0;
  double t_f = 0.0;
  double t_c = 0.0;
  std::optional<double> s0;

  double x_b() const { return entry_state(0); }
};

struct HypothesisReport {
  bool exit_above_herd = true;   // x(t2*) > 1/sigma_f at the arc exit
  bool terminal_below_cap = true;  // y(T) < K
  bool feasible = true;          // y <= K + 1e-6 on [0, T] and budget met
  bool arc_sigma_in_range = true;
  std::vector<std::string> notes;

  bool verified() const { return exit_above_herd && terminal_below_cap && feasible && arc_sigma_in_range; }
};

struct ConstrainedPolicy {
  double t1 = 0.0;
  double t2 = 0.0;
  double mu = 0.0;
  PolicyCase case_label = PolicyCase::k1_1;
  double x_inf_achieved = 0.0;
  ControlSchedule schedule;
  UnconstrainedPolicy unconstrained;
  InfectedPeak unconstrained_peak;
  std::optional<RegionGeometry> geometry;
  double wb_at_tc = 0.0;  // only meaningful for case 2.x
  HypothesisReport hypotheses;
};

// First time the unconstrained optimum reaches K, or nullopt when its peak
// stays <= K (ties within 1e-9 count as not reaching).
std::optional<double> hitting_time_tb(const EpidemicParams& params, const SolverOptions& opts = {});

// Geometry for a known entry time t_b.
RegionGeometry compute_geometry(const EpidemicParams& params, double t_b,
                                const SolverOptions& opts = {});

// Budget bound F[t_b](t2) on the strict-phase length; throws ArcOverrunError
// past t_m.
double F_of(double t2, const RegionGeometry& geometry, const EpidemicParams& params);

// min(F(t2), T - t2).
double G_of(double t2, const RegionGeometry& geometry, const EpidemicParams& params);

// The four-phase schedule sigma[t_b, t2, mu].
ControlSchedule capped_schedule(const EpidemicParams& params, const RegionGeometry& geometry,
                                double t2, double mu);

// Trajectory of capped_schedule from t_b on (the prefix is shared).
Trajectory capped_trajectory(const EpidemicParams& params, const RegionGeometry& geometry,
                             double t2, double mu, const SolverOptions& opts = {});

// Integral of (sigma_f x - 1)/y over [t2, t2 + G(t2)] along sigma[t_b, t2, G(t2)].
double w_b(double t2, const RegionGeometry& geometry, const EpidemicParams& params,
           const SolverOptions& opts = {});

// Point x at which the strict phase of length F(t2) ends, minus 1/sigma_f;
// its sign change on [t_b, t_c] is s0.
std::optional<double> compute_s0(const RegionGeometry& geometry, const EpidemicParams& params,
                                 const SolverOptions& opts = {});

ConstrainedPolicy solve_constrained(const EpidemicParams& params, const SolverOptions& opts = {});

// A policy family member sigma[t1, t2, mu] with its arc entry state.
struct PolicyShape {
  double t1 = 0.0;
  double x1 = 1.0;  // x(t1); unused when t1 == t2
  double t2 = 0.0;
  double mu = 0.0;
};

ControlSchedule schedule_of(const EpidemicParams& params, const PolicyShape& shape);

// dJ/dmu = gamma y3 (sigma_f - sigma_s) x_inf / (1 - sigma_f x_inf), y3 = y(t2 + mu).
double dJ_dmu(const PolicyShape& shape, const EpidemicParams& params, const SolverOptions& opts = {});

// Derivative of J(t2, G(t2)); nullopt at the kink t2 == t_c.
std::optional<double> jtilde_derivative(double t2, const RegionGeometry& geometry,
                                        const EpidemicParams& params, const SolverOptions& opts = {});

}  // namespace sircap
