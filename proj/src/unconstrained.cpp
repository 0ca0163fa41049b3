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

#include "sircap/unconstrained.hpp"

#include <algorithm>
#include <cmath>

#include "sircap/errors.hpp"
#include "sircap/quadrature.hpp"
#include "sircap/roots.hpp"

namespace sircap {
namespace {

// Ties at case thresholds go to the lower-numbered case.
bool at_most(double value, double threshold) {
  return value <= threshold + 1e-9 * std::max(1.0, std::abs(threshold));
}

}  // namespace

double lockdown_length(const EpidemicParams& params, double t) {
  return std::max(0.0, std::min(params.tau, params.horizon_T - t));
}

double w_function(double t, const EpidemicParams& params, const SolverOptions& opts) {
  if (t < 0.0 || t > params.horizon_T) throw DomainError("w_function: t outside [0, T]");
  const double mu = lockdown_length(params, t);
  if (mu <= 0.0) return 0.0;
  const ControlSchedule sched = single_lockdown(params, t, mu);
  // Only the strict phase is needed; the sigma_f prefix is propagated unrecorded.
  const double t_start = sched[0].t_end;
  const State at_start = t > 0.0 ? propagate(params, ControlSchedule({sched[0]}), opts.step, 0.0,
                                             initial_state(params))
                                 : initial_state(params);
  const Trajectory tr = t > 0.0 ? integrate_from(params, sched, opts.step, t_start, at_start, Events::kSkip)
                                : integrate_from(params, sched, opts.step, 0.0, at_start, Events::kSkip);
  return simpson(tr, t, t + mu,
                 [&](double, const State& s) { return switching_integrand(params, s); });
}

double alpha_function(double t, const EpidemicParams& params, const SolverOptions& opts) {
  if (t < 0.0 || t > params.horizon_T) throw DomainError("alpha_function: t outside [0, T]");
  // Under single_lockdown(t, T - t) the state at t is the sigma_f prefix.
  const ControlSchedule prefix({ControlSegment{ConstantSigma{params.sigma_f}, 0.0,
                                               std::max(t, 1e-12)}});
  const State s = t > 0.0 ? propagate(params, prefix, opts.step, 0.0, initial_state(params))
                          : initial_state(params);
  return 1.0 / (params.gamma * s(1));
}

UnconstrainedPolicy solve_unconstrained(const EpidemicParams& params, const SolverOptions& opts) {
  validate(params);
  const double T = params.horizon_T;
  const double tau = params.tau;
  const auto w = [&](double t) { return w_function(t, params, opts); };

  UnconstrainedPolicy out;
  const double w_start = w(0.0);
  if (at_most(w_start, 0.0)) {
    out = {0.0, tau, PolicyCase::k1_1, 0.0};
  } else {
    const double last_full = T - tau;
    const double w_last = w(last_full);
    if (at_most(w_last, 0.0)) {
      const double t_hat = bisect(w, 0.0, last_full, opts.root_tol, "w(t) = 0");
      out = {t_hat, tau, PolicyCase::k1_2, 0.0};
    } else if (at_most(w_last, alpha_function(last_full, params, opts))) {
      out = {last_full, tau, PolicyCase::k1_3, 0.0};
    } else {
      const double t_tilde = bisect([&](double t) { return w(t) - alpha_function(t, params, opts); },
                                    last_full, T, opts.root_tol, "w(t) = alpha(t)");
      out = {t_tilde, T - t_tilde, PolicyCase::k1_4, 0.0};
    }
  }
  out.x_inf_achieved = payoff(params, schedule_of(params, out), opts.step);
  return out;
}

ControlSchedule schedule_of(const EpidemicParams& params, const UnconstrainedPolicy& policy) {
  return single_lockdown(params, policy.t0, policy.mu0);
}

InfectedPeak unconstrained_peak(const EpidemicParams& params, const UnconstrainedPolicy& policy,
                                const SolverOptions& opts) {
  const Trajectory tr = integrate(params, schedule_of(params, policy), opts.step);
  const Eigen::Index i = tr.argmax_infected();
  return {tr.t(i), tr.states(1, i)};
}

InfectedPeak unconstrained_peak(const EpidemicParams& params, const SolverOptions& opts) {
  return unconstrained_peak(params, solve_unconstrained(params, opts), opts);
}

}  // namespace sircap
