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

namespace sircap {

// One instance of the capped SIR control problem. Defaults are the reference
// scenario used throughout the tests (K = 0.03, tau = 40).
struct EpidemicParams {
  double gamma = 0.1;        // recovery rate, 1/time
  double sigma_s = 0.8;      // reproduction number under strict quarantine
  double sigma_f = 1.5;      // reproduction number without restrictions
  double horizon_T = 365.0;  // end of the intervention window
  double tau = 40.0;         // maximum strict-quarantine time
  double cap_K = 0.03;       // maximum allowed infected fraction
  double x0 = 1.0 - 1e-6;
  double y0 = 1e-6;

  // Lower bound on v(T) = integral of sigma over [0, T].
  double budget() const { return sigma_s * tau + sigma_f * (horizon_T - tau); }
};

enum class Validation {
  kStrict,
  // Permits y0 = 0; only meaningful for tests of the integrator.
  kAllowNoInfection,
};

// Throws ParameterError describing the first violated invariant, or
// InfeasibleError when y0 >= cap_K.
void validate(const EpidemicParams& params, Validation mode = Validation::kStrict);

}  // namespace sircap
