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

#include "sircap/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sircap/errors.hpp"
#include "sircap/final_size.hpp"
#include "sircap/quadrature.hpp"
#include "sircap/roots.hpp"

namespace sircap {
namespace {

constexpr double kCaseGuard = 1e-9;
constexpr double kFeasTol = 1e-6;

bool at_most(double value, double threshold) {
  return value <= threshold + kCaseGuard * std::max(1.0, std::abs(threshold));
}

struct UnconstrainedSolve {
  UnconstrainedPolicy policy;
  InfectedPeak peak;
  std::optional<double> t_b;
};

UnconstrainedSolve solve_reference(const EpidemicParams& params, const SolverOptions& opts) {
  UnconstrainedSolve out;
  out.policy = solve_unconstrained(params, opts);
  const Trajectory tr = integrate_from(params, schedule_of(params, out.policy), opts.step, 0.0,
                                       initial_state(params), Events::kSkip);
  const Eigen::Index i = tr.argmax_infected();
  out.peak = {tr.t(i), tr.states(1, i)};
  if (at_most(out.peak.y_max, params.cap_K)) return out;
  // Before t0 the reference runs at sigma_f, and its peak is at t0.
  out.t_b = locate_event(tr, {EventSpecKind::kYHitsLevelRising, params.cap_K}, 0.0,
                         std::max(out.policy.t0, out.peak.t_peak), opts.event_tol);
  if (!out.t_b) throw InternalError("unconstrained peak exceeds K but no rising crossing found");
  return out;
}

HypothesisReport check_hypotheses(const EpidemicParams& params, const Trajectory& tr, double t1,
                                  double t2) {
  HypothesisReport rep;
  const double K = params.cap_K;
  const double herd = 1.0 / params.sigma_f;
  if (tr.max_infected() > K + kFeasTol) {
    rep.feasible = false;
    rep.notes.push_back("y exceeds K + 1e-6 (max y = " + std::to_string(tr.max_infected()) + ")");
  }
  if (tr.terminal()(2) < params.budget() - kFeasTol) {
    rep.feasible = false;
    rep.notes.push_back("L1 budget violated: v(T) = " + std::to_string(tr.terminal()(2)));
  }
  if (!(tr.terminal()(1) < K)) {
    rep.terminal_below_cap = false;
    rep.notes.push_back("y(T) >= K");
  }
  if (t2 > t1) {
    const double x2 = tr.at(t2)(0);
    if (!(x2 > herd)) {
      rep.exit_above_herd = false;
      rep.notes.push_back("arc exit at x = " + std::to_string(x2) + " <= 1/sigma_f");
    }
    const double sig_in = 1.0 / tr.at(t1)(0);
    const double sig_out = 1.0 / x2;
    if (!(sig_in > params.sigma_s && sig_out <= params.sigma_f + 1e-9)) {
      rep.arc_sigma_in_range = false;
      rep.notes.push_back("boundary control leaves (sigma_s, sigma_f)");
    }
  }
  // Contact points after the arc (or anywhere, without one) must also sit
  // where x > 1/sigma_f.
  for (Eigen::Index i = 0; i < tr.size(); ++i) {
    const double t = tr.t(i);
    if (t > t1 && t < t2) continue;
    if (tr.states(1, i) >= K - kFeasTol && t > t2 && !(tr.states(0, i) > herd)) {
      rep.exit_above_herd = false;
      rep.notes.push_back("contact with the cap at t = " + std::to_string(t) + " with x <= 1/sigma_f");
      break;
    }
  }
  return rep;
}

}  // namespace

std::optional<double> hitting_time_tb(const EpidemicParams& params, const SolverOptions& opts) {
  validate(params);
  return solve_reference(params, opts).t_b;
}

RegionGeometry compute_geometry(const EpidemicParams& params, double t_b, const SolverOptions& opts) {
  validate(params);
  const double T = params.horizon_T;
  if (!(t_b > 0.0 && t_b < T)) throw DomainError("compute_geometry: t_b outside (0, T)");
  RegionGeometry g;
  g.t_b = t_b;
  g.entry_state = propagate(params, ControlSchedule({ControlSegment{ConstantSigma{params.sigma_f}, 0.0, t_b}}),
                            opts.step, 0.0, initial_state(params));
  const double herd = 1.0 / params.sigma_f;
  if (!(g.x_b() > herd)) {
    // The cap is entered with y rising, which needs sigma_f x > 1.
    throw InternalError("arc entry with sigma_f x(t_b) <= 1");
  }
  const double drain = params.gamma * params.cap_K;
  g.t_m = std::min(T, t_b + (g.x_b() - herd) / drain);

  const auto F = [&](double t2) { return F_of(t2, g, params); };
  g.t_f = F(g.t_m) >= 0.0 ? g.t_m : bisect(F, t_b, g.t_m, 1e-12 * T, "F(t2) = 0");

  // F(t2) - (T - t2) is increasing.
  const auto excess = [&](double t2) { return F(t2) - (T - t2); };
  if (excess(t_b) >= 0.0) {
    g.t_c = t_b;
  } else if (excess(g.t_f) <= 0.0) {
    g.t_c = g.t_f;
  } else {
    g.t_c = bisect(excess, t_b, g.t_f, 1e-12 * T, "F(t2) = T - t2");
  }
  return g;
}

double F_of(double t2, const RegionGeometry& g, const EpidemicParams& params) {
  const double ds = params.sigma_s - params.sigma_f;
  const double drain = params.gamma * params.cap_K;
  if (t2 < g.t_b - 1e-12) throw DomainError("F_of: t2 before t_b");
  if (t2 > g.t_m + 1e-9) throw ArcOverrunError("F_of: t2 beyond t_m");
  const double elapsed = std::max(0.0, t2 - g.t_b);
  const double arg = 1.0 - drain * elapsed / g.x_b();
  if (!(arg > 0.0)) throw ArcOverrunError("F_of: arc drains x to zero");
  return params.tau + params.sigma_f * elapsed / ds + std::log(arg) / (drain * ds);
}

double G_of(double t2, const RegionGeometry& g, const EpidemicParams& params) {
  return std::max(0.0, std::min(F_of(t2, g, params), params.horizon_T - t2));
}

ControlSchedule capped_schedule(const EpidemicParams& params, const RegionGeometry& g, double t2,
                                double mu) {
  return boundary_lockdown(params, g.t_b, g.x_b(), params.cap_K, t2, mu);
}

Trajectory capped_trajectory(const EpidemicParams& params, const RegionGeometry& g, double t2,
                             double mu, const SolverOptions& opts) {
  return integrate_from(params, capped_schedule(params, g, t2, mu), opts.step, g.t_b,
                        g.entry_state, Events::kSkip);
}

double w_b(double t2, const RegionGeometry& g, const EpidemicParams& params, const SolverOptions& opts) {
  const double G = G_of(t2, g, params);
  if (G <= 0.0) return 0.0;
  const Trajectory tr = capped_trajectory(params, g, t2, G, opts);
  const double t3 = std::min(t2 + G, params.horizon_T);
  return simpson(tr, t2, t3, [&](double, const State& s) { return switching_integrand(params, s); });
}

std::optional<double> compute_s0(const RegionGeometry& g, const EpidemicParams& params,
                                 const SolverOptions& opts) {
  const double herd = 1.0 / params.sigma_f;
  const auto end_gap = [&](double t2) {
    const double F = std::max(0.0, F_of(t2, g, params));
    const Trajectory tr = capped_trajectory(params, g, t2, F, opts);
    return tr.at(std::min(t2 + F, params.horizon_T))(0) - herd;
  };
  if (end_gap(g.t_b) <= 0.0) return g.t_b;
  if (end_gap(g.t_c) >= 0.0) return g.t_c;
  return bisect(end_gap, g.t_b, g.t_c, opts.root_tol, "s0");
}

ConstrainedPolicy solve_constrained(const EpidemicParams& params, const SolverOptions& opts) {
  validate(params);
  const UnconstrainedSolve ref = solve_reference(params, opts);
  ConstrainedPolicy out;
  out.unconstrained = ref.policy;
  out.unconstrained_peak = ref.peak;

  if (!ref.t_b) {
    out.t1 = out.t2 = ref.policy.t0;
    out.mu = ref.policy.mu0;
    out.case_label = ref.policy.case_label;
    out.schedule = schedule_of(params, ref.policy);
  } else {
    const RegionGeometry g = compute_geometry(params, *ref.t_b, opts);
    const auto wb = [&](double t2) { return w_b(t2, g, params, opts); };
    const double inv_gk = 1.0 / (params.gamma * params.cap_K);
    out.wb_at_tc = wb(g.t_c);
    if (at_most(out.wb_at_tc, 0.0)) {
      out.case_label = PolicyCase::k2_1;
      out.t2 = out.wb_at_tc >= 0.0 || g.t_c <= g.t_b ? g.t_c
                                                     : bisect(wb, g.t_b, g.t_c, opts.root_tol, "w_b = 0");
    } else if (at_most(out.wb_at_tc, inv_gk)) {
      out.case_label = PolicyCase::k2_2;
      out.t2 = g.t_c;
    } else {
      out.case_label = PolicyCase::k2_3;
      out.t2 = bisect([&](double t2) { return wb(t2) - inv_gk; }, g.t_c, g.t_f, opts.root_tol,
                      "w_b = 1/(gamma K)");
    }
    out.t1 = g.t_b;
    out.mu = G_of(out.t2, g, params);
    out.schedule = capped_schedule(params, g, out.t2, out.mu);
    out.geometry = g;
  }

  const Trajectory tr = integrate(params, out.schedule, opts.step);
  out.x_inf_achieved = payoff(params, tr.terminal());
  out.hypotheses = check_hypotheses(params, tr, out.t1, out.t2);
  return out;
}

ControlSchedule schedule_of(const EpidemicParams& params, const PolicyShape& shape) {
  return boundary_lockdown(params, shape.t1, shape.x1, params.cap_K, shape.t2, shape.mu);
}

double dJ_dmu(const PolicyShape& shape, const EpidemicParams& params, const SolverOptions& opts) {
  const Trajectory tr = integrate_from(params, schedule_of(params, shape), opts.step, 0.0,
                                       initial_state(params), Events::kSkip);
  const double y3 = tr.at(std::min(shape.t2 + shape.mu, params.horizon_T))(1);
  const double xi = payoff(params, tr.terminal());
  return params.gamma * y3 * (params.sigma_f - params.sigma_s) * xi / (1.0 - params.sigma_f * xi);
}

std::optional<double> jtilde_derivative(double t2, const RegionGeometry& g, const EpidemicParams& params,
                                        const SolverOptions& opts) {
  if (std::abs(t2 - g.t_c) <= 1e-12 * std::max(1.0, g.t_c)) return std::nullopt;
  const double G = G_of(t2, g, params);
  const double t3 = std::min(t2 + G, params.horizon_T);
  const Trajectory tr = capped_trajectory(params, g, t2, G, opts);
  const double x2 = tr.at(t2)(0);
  const double y3 = tr.at(t3)(1);
  const double xi = payoff(params, tr.terminal());
  const double K = params.cap_K;
  const double gk = params.gamma * K;
  const double prefactor = params.gamma * gk * y3 * (1.0 - params.sigma_s * x2) * xi /
                           (x2 * (1.0 - params.sigma_f * xi));
  const double wb = G > 0.0 ? simpson(tr, t2, t3, [&](double, const State& s) {
    return switching_integrand(params, s);
  })
                            : 0.0;
  return prefactor * (t2 < g.t_c ? wb : wb - 1.0 / gk);
}

}  // namespace sircap
