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

#include "sircap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "sircap/errors.hpp"

namespace sircap {
namespace {

constexpr double kRangeTol = 1e-9;
constexpr double kClampTol = 1e-12;
// Relative threshold on sigma * x - 1 below which y' is treated as zero.
constexpr double kFlatTol = 1e-10;

Eigen::Index step_index(const Trajectory& tr, double time) {
  const double* begin = tr.t.data();
  const double* end = begin + tr.t.size();
  const double* it = std::upper_bound(begin, end, time);
  const Eigen::Index k = static_cast<Eigen::Index>(it - begin) - 1;
  return std::clamp<Eigen::Index>(k, 0, tr.t.size() - 2);
}

// First root of g in [lo, hi] where `before(g(a))` holds left of the root and
// `after(g(b))` right of it, scanning the mesh points in between.
std::optional<double> bracket_and_bisect(const Trajectory& tr, double lo, double hi, double tol,
                                         const std::function<double(double)>& g,
                                         const std::function<bool(double)>& before,
                                         const std::function<bool(double)>& after) {
  std::vector<double> grid;
  grid.push_back(lo);
  const double* begin = tr.t.data();
  const double* end = begin + tr.t.size();
  for (const double* it = std::upper_bound(begin, end, lo); it != end && *it < hi; ++it) {
    grid.push_back(*it);
  }
  grid.push_back(hi);

  double prev_t = grid.front();
  double prev_g = g(prev_t);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur_t = grid[i];
    const double cur_g = g(cur_t);
    if (before(prev_g) && after(cur_g)) {
      double a = prev_t;
      double b = cur_t;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (after(g(m))) {
          b = m;
        } else {
          a = m;
        }
      }
      return 0.5 * (a + b);
    }
    prev_t = cur_t;
    prev_g = cur_g;
  }
  return std::nullopt;
}

void annotate_events(Trajectory& tr, const EpidemicParams& params) {
  const ControlSchedule& sched = tr.schedule;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    if (!sched[i].is_arc()) continue;
    if (sched[i].t_start >= tr.t(0)) tr.events.push_back({EventKind::kBoundaryHit, sched[i].t_start});
    if (sched[i].t_end < sched.end()) tr.events.push_back({EventKind::kBoundaryExit, sched[i].t_end});
  }
  const double lo = tr.t(0);
  const double hi = tr.t(tr.size() - 1);
  const double K = params.cap_K;
  if (auto hit = locate_event(tr, {EventSpecKind::kYHitsLevelRising, K}, lo, hi, 1e-9)) {
    const bool on_arc = sched[sched.segment_index(*hit)].is_arc();
    if (!on_arc) tr.events.push_back({EventKind::kBoundaryHit, *hit});
  }
  if (auto herd = locate_event(tr, {EventSpecKind::kXCrossesLevel, 1.0 / params.sigma_f}, lo, hi, 1e-9)) {
    tr.events.push_back({EventKind::kHerdCrossing, *herd});
  }
  if (auto peak = locate_event(tr, {EventSpecKind::kYPeak, 0.0}, lo, hi, 1e-9)) {
    tr.events.push_back({EventKind::kYPeak, *peak});
  }
  std::stable_sort(tr.events.begin(), tr.events.end(),
                   [](const TrajectoryEvent& a, const TrajectoryEvent& b) { return a.t < b.t; });
}

}  // namespace

std::size_t steps_for(double length, double step) {
  if (!(step > 0.0)) throw DomainError("integration step must be > 0");
  auto n = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
  n = std::max<std::size_t>(n, 2);
  return n + (n % 2);
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kBoundaryHit:
      return "boundary-hit";
    case EventKind::kBoundaryExit:
      return "boundary-exit";
    case EventKind::kHerdCrossing:
      return "herd-crossing";
    case EventKind::kYPeak:
      return "y-peak";
  }
  return "unknown";
}

namespace detail {

void check_state(State& s, double t) {
  for (int i = 0; i < 2; ++i) {
    double& c = s(i);
    if (!std::isfinite(c) || c < -kRangeTol || c > 1.0 + kRangeTol) {
      throw NumericalFailure("state left [0, 1] at t = " + std::to_string(t) +
                             (i == 0 ? " (x = " : " (y = ") + std::to_string(c) + ")");
    }
    if (c < 0.0 && c >= -kClampTol) c = 0.0;
  }
}

std::size_t first_segment_at(const ControlSchedule& schedule, double t_from) {
  if (schedule.size() == 0) throw ScheduleError("empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (std::abs(schedule[i].t_start - t_from) <= 1e-9 * std::max(1.0, std::abs(t_from))) return i;
  }
  throw DomainError("integration must start at a segment boundary (t = " +
                    std::to_string(t_from) + ")");
}

}  // namespace detail

Eigen::Index Trajectory::index_at(double time) const {
  const double* begin = t.data();
  const double* end = begin + t.size();
  const double* it = std::lower_bound(begin, end, time - 1e-9 * std::max(1.0, std::abs(time)));
  if (it == end || std::abs(*it - time) > 1e-9 * std::max(1.0, std::abs(time))) {
    throw DomainError("t = " + std::to_string(time) + " is not a mesh point");
  }
  return static_cast<Eigen::Index>(it - begin);
}

State Trajectory::at(double time) const {
  if (time < t(0) - 1e-12 || time > t(t.size() - 1) + 1e-12) {
    throw DomainError("dense output requested outside the trajectory");
  }
  const Eigen::Index k = step_index(*this, time);
  if (time == t(k)) return states.col(k);
  if (time == t(k + 1)) return states.col(k + 1);
  const ControlSegment& seg = schedule[step_segment[static_cast<std::size_t>(k)]];
  const double t0 = t(k);
  const double h = t(k + 1) - t0;
  const State s0 = states.col(k);
  const State s1 = states.col(k + 1);
  const State f0 = h * sir_rhs<double>(s0, evaluate_segment(seg, t0), gamma);
  const State f1 = h * sir_rhs<double>(s1, evaluate_segment(seg, t0 + h), gamma);
  const double u = std::clamp((time - t0) / h, 0.0, 1.0);
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * s0 + (u3 - 2 * u2 + u) * f0 + (-2 * u3 + 3 * u2) * s1 +
         (u3 - u2) * f1;
}

State Trajectory::derivative_at(double time) const {
  const Eigen::Index k = step_index(*this, time);
  const ControlSegment& seg = schedule[step_segment[static_cast<std::size_t>(k)]];
  return sir_rhs<double>(at(time), evaluate_segment(seg, time), gamma);
}

Eigen::Index Trajectory::argmax_infected() const {
  Eigen::Index idx = 0;
  states.row(1).maxCoeff(&idx);
  return idx;
}

Trajectory integrate_from(const EpidemicParams& params, const ControlSchedule& schedule,
                          double step, double t_from, const State& initial, Events events) {
  const std::size_t first = detail::first_segment_at(schedule, t_from);
  std::size_t total_steps = 0;
  for (std::size_t si = first; si < schedule.size(); ++si) {
    total_steps += steps_for(schedule[si].length(), step);
  }

  Trajectory tr;
  tr.schedule = schedule;
  tr.gamma = params.gamma;
  const auto n_samples = static_cast<Eigen::Index>(total_steps + 1);
  tr.t.resize(n_samples);
  tr.states.resize(3, n_samples);
  tr.sigma.resize(n_samples);
  tr.step_segment.reserve(total_steps);

  State state = initial;
  detail::check_state(state, t_from);
  Eigen::Index i = 0;
  tr.t(0) = schedule[first].t_start;
  tr.states.col(0) = state;
  tr.sigma(0) = evaluate_segment(schedule[first], tr.t(0));
  detail::march(params, schedule, step, t_from, state,
                [&](std::size_t si, double t, const State& s) {
                  ++i;
                  tr.t(i) = t;
                  tr.states.col(i) = s;
                  tr.step_segment.push_back(static_cast<std::uint32_t>(si));
                  // Right-continuous: a sample at a junction takes the next law.
                  const bool junction = t >= schedule[si].t_end && si + 1 < schedule.size();
                  tr.sigma(i) = evaluate_segment(schedule[junction ? si + 1 : si], t);
                });
  if (events == Events::kAnnotate) annotate_events(tr, params);
  return tr;
}

Trajectory integrate(const EpidemicParams& params, const ControlSchedule& schedule, double step,
                     Validation mode) {
  validate(params, mode);
  if (std::abs(schedule.start()) > 1e-12) throw ScheduleError("schedule must start at t = 0");
  return integrate_from(params, schedule, step, schedule.start(), initial_state(params));
}

std::optional<double> locate_event(const Trajectory& tr, EventSpec spec, double lo, double hi,
                                   double tol) {
  lo = std::max(lo, tr.t(0));
  hi = std::min(hi, tr.t(tr.size() - 1));
  if (!(hi > lo)) return std::nullopt;
  switch (spec.kind) {
    case EventSpecKind::kYHitsLevelRising: {
      const auto g = [&](double t) { return tr.at(t)(1) - spec.level; };
      return bracket_and_bisect(
          tr, lo, hi, tol, g, [](double v) { return v < 0.0; }, [](double v) { return v >= 0.0; });
    }
    case EventSpecKind::kXCrossesLevel: {
      const auto g = [&](double t) { return tr.at(t)(0) - spec.level; };
      const double g_lo = g(lo);
      if (g_lo == 0.0) return lo;
      if (g_lo > 0.0) {
        return bracket_and_bisect(
            tr, lo, hi, tol, g, [](double v) { return v > 0.0; }, [](double v) { return v <= 0.0; });
      }
      return bracket_and_bisect(
          tr, lo, hi, tol, g, [](double v) { return v < 0.0; }, [](double v) { return v >= 0.0; });
    }
    case EventSpecKind::kYPeak: {
      // sign(y') = sign(sigma x - 1) while y > 0.
      const auto g = [&](double t) { return evaluate_control(tr.schedule, t) * tr.at(t)(0) - 1.0; };
      return bracket_and_bisect(
          tr, lo, hi, tol, g, [](double v) { return v > kFlatTol; },
          [](double v) { return v < -kFlatTol; });
    }
  }
  return std::nullopt;
}

std::optional<double> locate_event(const EpidemicParams& params, const ControlSchedule& schedule,
                                   EventSpec spec, double lo, double hi, double tol, double step) {
  const Trajectory tr = integrate(params, schedule, step, Validation::kAllowNoInfection);
  return locate_event(tr, spec, lo, hi, tol);
}

}  // namespace sircap
