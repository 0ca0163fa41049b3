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

#include <cstdint>
#include <optional>
#include <string_view>

#include "sircap/control.hpp"
#include "sircap/dynamics.hpp"
#include "sircap/params.hpp"

namespace sircap {

// Which branch of the case analysis produced a policy. 1.x: the cap never
// binds; 2.x: the optimal path rides the boundary y = K.
enum class PolicyCase : std::uint8_t { k1_1, k1_2, k1_3, k1_4, k2_1, k2_2, k2_3 };

std::string_view to_string(PolicyCase c);
std::optional<PolicyCase> parse_policy_case(std::string_view text);

inline bool is_capped(PolicyCase c) { return c >= PolicyCase::k2_1; }

struct SolverOptions {
  double step = kDefaultStep;
  double root_tol = 1e-6;
  double event_tol = 1e-6;
};

// J: final susceptible fraction x_inf(x(T), y(T), sigma_f) for a schedule.
double payoff(const EpidemicParams& params, const State& terminal);
double payoff(const EpidemicParams& params, const ControlSchedule& schedule, double step);

// (sigma_f x - 1) / y, the integrand of the switching indicators w and w_b.
inline double switching_integrand(const EpidemicParams& params, const State& s) {
  return (params.sigma_f * s(0) - 1.0) / s(1);
}

}  // namespace sircap
