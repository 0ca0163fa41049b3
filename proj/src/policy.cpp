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

#include "sircap/policy.hpp"

#include <array>

#include "sircap/final_size.hpp"

namespace sircap {
namespace {

constexpr std::array<std::string_view, 7> kCaseNames = {"1.1", "1.2", "1.3", "1.4",
                                                        "2.1", "2.2", "2.3"};

}  // namespace

std::string_view to_string(PolicyCase c) { return kCaseNames[static_cast<std::size_t>(c)]; }

std::optional<PolicyCase> parse_policy_case(std::string_view text) {
  for (std::size_t i = 0; i < kCaseNames.size(); ++i) {
    if (kCaseNames[i] == text) return static_cast<PolicyCase>(i);
  }
  return std::nullopt;
}

double payoff(const EpidemicParams& params, const State& terminal) {
  return x_infinity(terminal(0), terminal(1), params.sigma_f).x_inf;
}

double payoff(const EpidemicParams& params, const ControlSchedule& schedule, double step) {
  return payoff(params, propagate(params, schedule, step, 0.0, initial_state(params)));
}

}  // namespace sircap
