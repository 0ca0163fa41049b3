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

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "sircap/params.hpp"

namespace sircap {

struct ConstantSigma {
  double value = 0.0;
};

// Feedback control that holds the infected fraction at `level`. Along the arc
// x decreases linearly, x(t) = x_entry - gamma * level * (t - t_entry), and
// sigma(t) = 1 / x(t).
struct BoundaryArc {
  double x_entry = 0.0;
  double t_entry = 0.0;
  double gamma = 0.0;
  double level = 0.0;

  double drain_rate() const { return gamma * level; }
};

struct ControlSegment {
  std::variant<ConstantSigma, BoundaryArc> kind;
  double t_start = 0.0;
  double t_end = 0.0;

  bool is_arc() const { return std::holds_alternative<BoundaryArc>(kind); }
  double length() const { return t_end - t_start; }
};

// Piecewise control on a contiguous interval. Construction rejects gaps,
// overlaps and empty or reversed segments.
class ControlSchedule {
 public:
  ControlSchedule() = default;
  explicit ControlSchedule(std::vector<ControlSegment> segments);

  std::span<const ControlSegment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  const ControlSegment& operator[](std::size_t i) const { return segments_[i]; }
  double start() const;
  double end() const;

  // Index of the segment that owns t. Controls are right-continuous: at a
  // junction the right-hand segment wins; t == end() maps to the last one.
  std::size_t segment_index(double t) const;

 private:
  std::vector<ControlSegment> segments_;
};

// x on a boundary arc at time t >= t_entry; throws ArcOverrunError when the
// arc has been extended until x <= 0.
double boundary_x(const BoundaryArc& arc, double t);

// Value of one segment's control law at t (no range check against the
// segment's own interval, so RK4 stages at its right end are well defined).
double evaluate_segment(const ControlSegment& segment, double t);

// sigma(t); throws DomainError outside the schedule's interval.
double evaluate_control(const ControlSchedule& schedule, double t);

// Closed-form integral of sigma over the schedule's interval.
double l1_norm(const ControlSchedule& schedule);

// Throws ScheduleError unless the schedule covers [0, T] and stays within
// [sigma_s, sigma_f] (to `tol`).
void check_admissible(const ControlSchedule& schedule, const EpidemicParams& params,
                      double tol = 1e-9);

// sigma == value on [0, T].
ControlSchedule constant_schedule(const EpidemicParams& params, double value);

// sigma_f, then sigma_s on (start, start + duration], then sigma_f up to T.
ControlSchedule single_lockdown(const EpidemicParams& params, double start, double duration);

// sigma_f up to t1, boundary arc holding y at `level` on (t1, t2], sigma_s on
// (t2, t2 + mu], sigma_f up to T. `x1` is x(t1). Zero-length phases are
// dropped, so t1 == t2 yields single_lockdown(t2, mu).
ControlSchedule boundary_lockdown(const EpidemicParams& params, double t1, double x1,
                                  double level, double t2, double mu);

}  // namespace sircap
