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

#include <cmath>

#include "sircap/dynamics.hpp"
#include "sircap/params.hpp"

namespace sircap::testing {

inline EpidemicParams scenario(double cap_K, double tau) {
  EpidemicParams p;
  p.cap_K = cap_K;
  p.tau = tau;
  return p;
}

// x(t -> inf) by brute-force RK4 with sigma held constant, run until y < 1e-12.
// The final size does not depend on gamma, so gamma = 1.
inline double long_run_x_inf(double x, double y, double sigma) {
  State s(x, y, 0.0);
  const auto constant = [sigma](double) { return sigma; };
  double t = 0.0;
  const double h = 0.02;
  while (s(1) >= 1e-12 && t < 1e6) {
    s = rk4_step<double>(s, t, h, 1.0, constant);
    t += h;
  }
  return s(0);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace sircap::testing
