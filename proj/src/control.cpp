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

#include "sircap/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sircap/errors.hpp"

namespace sircap {
namespace {

constexpr double kJunctionTol = 1e-9;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kJunctionTol * std::max(1.0, std::abs(a));
}

void push_if_nonempty(std::vector<ControlSegment>& out, ControlSegment seg) {
  if (seg.t_end - seg.t_start > 1e-12) out.push_back(seg);
}

}  // namespace

ControlSchedule::ControlSchedule(std::vector<ControlSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ScheduleError("schedule has no segments");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.t_end > s.t_start)) {
      throw ScheduleError("segment " + std::to_string(i) + " is empty or reversed");
    }
    if (i > 0) {
      const double prev_end = segments_[i - 1].t_end;
      if (!nearly_equal(prev_end, s.t_start)) {
        throw ScheduleError(std::string(s.t_start > prev_end ? "gap" : "overlap") +
                            " before segment " + std::to_string(i));
      }
      // Snap so segment boundaries are shared exactly.
      segments_[i].t_start = prev_end;
    }
  }
}

double ControlSchedule::start() const { return segments_.front().t_start; }
double ControlSchedule::end() const { return segments_.back().t_end; }

std::size_t ControlSchedule::segment_index(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const ControlSegment& s) { return v < s.t_start; });
  std::size_t idx = it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin()) - 1;
  return std::min(idx, segments_.size() - 1);
}

double boundary_x(const BoundaryArc& arc, double t) {
  if (t < arc.t_entry - 1e-12) throw DomainError("boundary_x: t before arc entry");
  const double x = arc.x_entry - arc.drain_rate() * (t - arc.t_entry);
  if (!(x > 0.0)) throw ArcOverrunError("boundary arc extended past x = 0");
  return x;
}

double evaluate_segment(const ControlSegment& segment, double t) {
  if (const auto* c = std::get_if<ConstantSigma>(&segment.kind)) return c->value;
  const auto& arc = std::get<BoundaryArc>(segment.kind);
  return 1.0 / boundary_x(arc, t);
}

double evaluate_control(const ControlSchedule& schedule, double t) {
  if (schedule.size() == 0) throw ScheduleError("empty schedule");
  if (!(t >= schedule.start() - 1e-12 && t <= schedule.end() + 1e-12)) {
    throw DomainError("evaluate_control: t = " + std::to_string(t) + " outside schedule");
  }
  return evaluate_segment(schedule[schedule.segment_index(t)], t);
}

double l1_norm(const ControlSchedule& schedule) {
  double total = 0.0;
  for (const auto& s : schedule.segments()) {
    if (const auto* c = std::get_if<ConstantSigma>(&s.kind)) {
      total += c->value * s.length();
      continue;
    }
    const auto& arc = std::get<BoundaryArc>(s.kind);
    const double xa = boundary_x(arc, s.t_start);
    const double xb = boundary_x(arc, s.t_end);
    const double r = arc.drain_rate();
    // d/dt ln x = -r / x, so int 1/x dt = -ln(x) / r.
    total += r > 0.0 ? std::log(xa / xb) / r : s.length() / xa;
  }
  return total;
}

void check_admissible(const ControlSchedule& schedule, const EpidemicParams& params, double tol) {
  if (schedule.size() == 0) throw ScheduleError("empty schedule");
  if (!nearly_equal(schedule.start(), 0.0) || !nearly_equal(schedule.end(), params.horizon_T)) {
    throw ScheduleError("schedule does not cover [0, T]");
  }
  for (const auto& s : schedule.segments()) {
    // Arc controls are monotone in t, so the endpoints bound the segment.
    for (double t : {s.t_start, s.t_end}) {
      const double v = evaluate_segment(s, t);
      if (v < params.sigma_s - tol || v > params.sigma_f + tol) {
        throw ScheduleError("sigma = " + std::to_string(v) + " at t = " + std::to_string(t) +
                            " outside [sigma_s, sigma_f]");
      }
    }
  }
}

ControlSchedule constant_schedule(const EpidemicParams& params, double value) {
  return ControlSchedule({ControlSegment{ConstantSigma{value}, 0.0, params.horizon_T}});
}

ControlSchedule single_lockdown(const EpidemicParams& params, double start, double duration) {
  return boundary_lockdown(params, start, 1.0, params.cap_K, start, duration);
}

ControlSchedule boundary_lockdown(const EpidemicParams& params, double t1, double x1,
                                  double level, double t2, double mu) {
  const double T = params.horizon_T;
  if (!(t1 >= 0.0 && t1 <= t2 + 1e-12 && mu >= -1e-12 && t2 + mu <= T + 1e-9)) {
    throw ScheduleError("boundary_lockdown: need 0 <= t1 <= t2 and t2 + mu <= T");
  }
  const double t3 = std::min(t2 + std::max(mu, 0.0), T);
  std::vector<ControlSegment> segs;
  push_if_nonempty(segs, {ConstantSigma{params.sigma_f}, 0.0, t1});
  push_if_nonempty(segs, {BoundaryArc{x1, t1, params.gamma, level}, t1, t2});
  push_if_nonempty(segs, {ConstantSigma{params.sigma_s}, std::max(t1, t2), t3});
  push_if_nonempty(segs, {ConstantSigma{params.sigma_f}, t3, T});
  if (segs.empty()) segs.push_back({ConstantSigma{params.sigma_f}, 0.0, T});
  // Dropped slivers leave sub-1e-12 seams; close them.
  segs.front().t_start = 0.0;
  for (std::size_t i = 1; i < segs.size(); ++i) segs[i].t_start = segs[i - 1].t_end;
  segs.back().t_end = T;
  return ControlSchedule(std::move(segs));
}

}  // namespace sircap
