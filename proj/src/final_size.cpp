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

#include "sircap/final_size.hpp"

#include <cmath>
#include <numbers>

#include "sircap/errors.hpp"
#include "sircap/lambert_w.hpp"

namespace sircap {

FinalSizeResult x_infinity(double x, double y, double sigma) {
  if (!(x > 0.0) || y < 0.0 || sigma < 0.0) throw DomainError("x_infinity: need x > 0, y >= 0, sigma >= 0");
  if (sigma == 0.0) return {x, 0.0, 0.0};
  const double r = rho(x, y, sigma);
  const double z = -sigma * r;
  if (z < -1.0 / std::numbers::e - 1e-15) {
    throw InternalError("x_infinity: -sigma rho below -1/e; state outside the unit simplex");
  }
  FinalSizeResult out;
  out.w_value = lambert_w0(z);
  out.x_inf = -out.w_value / sigma;
  out.residual = std::abs(out.x_inf - r * std::exp(sigma * out.x_inf));
  return out;
}

double dxinf_dx(double x, double y, double sigma) {
  const double xi = x_infinity(x, y, sigma).x_inf;
  return (1.0 - sigma * x) / x * xi / (1.0 - sigma * xi);
}

double dxinf_dy(double x, double y, double sigma) {
  const double xi = x_infinity(x, y, sigma).x_inf;
  return -sigma * xi / (1.0 - sigma * xi);
}

}  // namespace sircap
