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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sircap/control.hpp"
#include "sircap/params.hpp"

namespace sircap {

// (x, y, v): susceptible fraction, infected fraction, running integral of sigma.
template <typename Scalar>
using SirState = Eigen::Matrix<Scalar, 3, 1>;

using State = SirState<double>;

template <typename Scalar>
inline SirState<Scalar> sir_rhs(const SirState<Scalar>& s, Scalar sigma, Scalar gamma) {
  const Scalar infection = gamma * sigma * s(0) * s(1);
  return SirState<Scalar>(-infection, infection - gamma * s(1), sigma);
}

// Classical fourth-order Runge-Kutta step; `sigma_at(t)` supplies the control.
template <typename Scalar, typename SigmaFn>
inline SirState<Scalar> rk4_step(const SirState<Scalar>& s, Scalar t, Scalar h, Scalar gamma,
                                 const SigmaFn& sigma_at) {
  const Scalar half = h / Scalar(2);
  const Scalar s_mid = sigma_at(t + half);
  const SirState<Scalar> k1 = sir_rhs<Scalar>(s, sigma_at(t), gamma);
  const SirState<Scalar> k2 = sir_rhs<Scalar>(s + half * k1, s_mid, gamma);
  const SirState<Scalar> k3 = sir_rhs<Scalar>(s + half * k2, s_mid, gamma);
  const SirState<Scalar> k4 = sir_rhs<Scalar>(s + h * k3, sigma_at(t + h), gamma);
  return s + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

inline constexpr double kDefaultStep = 0.01;

// Number of equal RK4 steps used on an interval of `length`: the smallest even
// count whose step does not exceed `step` (even so Simpson applies per segment).
std::size_t steps_for(double length, double step);

enum class EventKind : std::uint8_t {
  kBoundaryHit,
  kBoundaryExit,
  kHerdCrossing,  // x crosses 1 / sigma_f downwards
  kYPeak,
};

std::string_view to_string(EventKind kind);

struct TrajectoryEvent {
  EventKind kind;
  double t;
};

// Sampled solution on the integration mesh. Every segment boundary of the
// schedule is a mesh point; `step_segment[k]` is the segment that drove the
// step from sample k to k + 1.
struct Trajectory {
  Eigen::VectorXd t;
  Eigen::Matrix3Xd states;
  Eigen::VectorXd sigma;  // right-continuous control value at each sample
  std::vector<std::uint32_t> step_segment;
  ControlSchedule schedule;
  double gamma = 0.0;
  std::vector<TrajectoryEvent> events;

  Eigen::Index size() const { return t.size(); }
  State state(Eigen::Index i) const { return states.col(i); }
  State terminal() const { return states.col(states.cols() - 1); }

  // Index of the mesh point at time `time` (to 1e-9); throws DomainError if
  // `time` is not a mesh point.
  Eigen::Index index_at(double time) const;

  // Cubic Hermite dense output; exact at mesh points.
  State at(double time) const;

  // Time derivative of the dense output, using the step's own control law.
  State derivative_at(double time) const;

  Eigen::Index argmax_infected() const;
  double max_infected() const { return states.row(1).maxCoeff(); }
};

// Integrates the controlled system over the schedule's interval, starting at
// (x0, y0, 0). Throws NumericalFailure if x or y leave [0, 1] by more than
// 1e-9; values in [-1e-12, 0) are clamped to zero.
Trajectory integrate(const EpidemicParams& params, const ControlSchedule& schedule,
                     double step = kDefaultStep, Validation mode = Validation::kStrict);

enum class Events : std::uint8_t { kAnnotate, kSkip };

// Same, but starting from `initial` at `t_from`, which must be the start of
// one of the schedule's segments. The mesh on the remaining segments is the
// same as for a full integration, so results agree bitwise.
Trajectory integrate_from(const EpidemicParams& params, const ControlSchedule& schedule,
                          double step, double t_from, const State& initial,
                          Events events = Events::kAnnotate);

namespace detail {
void check_state(State& s, double t);
std::size_t first_segment_at(const ControlSchedule& schedule, double t_from);

// Steps through the schedule from `t_from`, calling
// `on_step(segment_index, t_next, state)` after every RK4 step.
template <typename StepFn>
State march(const EpidemicParams& params, const ControlSchedule& schedule, double step,
            double t_from, State state, StepFn&& on_step) {
  for (std::size_t si = first_segment_at(schedule, t_from); si < schedule.size(); ++si) {
    const ControlSegment& seg = schedule[si];
    const std::size_t n = steps_for(seg.length(), step);
    const double h = seg.length() / static_cast<double>(n);
    const auto sigma_at = [&seg](double t) { return evaluate_segment(seg, t); };
    for (std::size_t k = 0; k < n; ++k) {
      const double t = seg.t_start + static_cast<double>(k) * h;
      state = rk4_step<double>(state, t, h, params.gamma, sigma_at);
      const double t_next = k + 1 == n ? seg.t_end : seg.t_start + static_cast<double>(k + 1) * h;
      check_state(state, t_next);
      on_step(si, t_next, state);
    }
  }
  return state;
}
}  // namespace detail

// Allocation-free propagation: calls `observer(t, state)` after every step and
// returns the state at the schedule's end. Same mesh as integrate().
template <typename Observer>
State propagate(const EpidemicParams& params, const ControlSchedule& schedule, double step,
                double t_from, State state, Observer&& observer) {
  return detail::march(params, schedule, step, t_from, std::move(state),
                       [&observer](std::size_t, double t, const State& s) { observer(t, s); });
}

inline State propagate(const EpidemicParams& params, const ControlSchedule& schedule,
                       double step, double t_from, const State& state) {
  return propagate(params, schedule, step, t_from, state, [](double, const State&) {});
}

inline State initial_state(const EpidemicParams& params) {
  return State(params.x0, params.y0, 0.0);
}

enum class EventSpecKind : std::uint8_t {
  kYHitsLevelRising,
  kXCrossesLevel,
  kYPeak,
};

struct EventSpec {
  EventSpecKind kind;
  double level = 0.0;
};

// First event of the given kind inside [lo, hi], localized by bisection on the
// dense output to |dt| <= tol. Returns nullopt when the samples show no sign
// change in the bracket.
std::optional<double> locate_event(const Trajectory& trajectory, EventSpec spec, double lo,
                                   double hi, double tol = 1e-6);

std::optional<double> locate_event(const EpidemicParams& params, const ControlSchedule& schedule,
                                   EventSpec spec, double lo, double hi, double tol = 1e-6,
                                   double step = kDefaultStep);

}  // namespace sircap
