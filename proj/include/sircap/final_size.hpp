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

namespace sircap {

// rho(x, y, sigma) = x exp(-sigma (x + y)); constant along any trajectory
// with constant sigma.
inline double rho(double x, double y, double sigma) { return x * std::exp(-sigma * (x + y)); }

struct FinalSizeResult {
  double x_inf = 0.0;    // lim x(t) under constant sigma
  double w_value = 0.0;  // W0 value used, -sigma * x_inf
  double residual = 0.0; // |x_inf - rho e^{sigma x_inf}|
};

// Final susceptible fraction from state (x, y) under constant sigma:
// x_inf = -W0(-sigma rho) / sigma. sigma == 0 returns x.
FinalSizeResult x_infinity(double x, double y, double sigma);

// Closed-form partial derivatives of x_inf.
double dxinf_dx(double x, double y, double sigma);
double dxinf_dy(double x, double y, double sigma);

}  // namespace sircap
