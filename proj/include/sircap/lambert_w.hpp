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
#include <limits>
#include <numbers>

#include "sircap/errors.hpp"

namespace sircap {

namespace detail {

template <typename Scalar>
Scalar lambert_w0_initial_guess(Scalar z) {
  using std::log;
  using std::sqrt;
  const Scalar e = std::numbers::e_v<Scalar>;
  if (z < Scalar(-0.25)) {
    // Branch-point series in p = sqrt(2 (e z + 1)).
    const Scalar p = sqrt(std::max(Scalar(0), Scalar(2) * (e * z + Scalar(1))));
    return Scalar(-1) + p * (Scalar(1) + p * (Scalar(-1) / Scalar(3) + p * Scalar(11) / Scalar(72)));
  }
  // Winitzki's approximation, within a few percent for z >= -0.25.
  const Scalar l = std::log1p(z);
  return l * (Scalar(1) - std::log1p(l) / (Scalar(2) + l));
}

}  // namespace detail

// Principal branch W0 of the Lambert W function (w e^w = z, w >= -1) by Halley
// iteration. Throws DomainError for z < -1/e.
template <typename Scalar>
Scalar lambert_w0(Scalar z) {
  using std::abs;
  using std::exp;
  const Scalar branch = -Scalar(1) / std::numbers::e_v<Scalar>;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  if (std::isnan(z)) throw DomainError("lambert_w0: NaN argument");
  if (z < branch) {
    // Rounding of -1/e itself lands a few ulps either side.
    if (z < branch - Scalar(4) * eps) throw DomainError("lambert_w0: argument below -1/e");
    return Scalar(-1);
  }
  if (z == Scalar(0)) return Scalar(0);
  if (z == branch) return Scalar(-1);

  Scalar w = detail::lambert_w0_initial_guess(z);
  for (int iter = 0; iter < 50; ++iter) {
    const Scalar ew = exp(w);
    const Scalar f = w * ew - z;
    const Scalar wp1 = w + Scalar(1);
    if (wp1 <= Scalar(0)) {
      w = Scalar(-1) + Scalar(1e-8);
      continue;
    }
    const Scalar denom = ew * wp1 - (w + Scalar(2)) * f / (Scalar(2) * wp1);
    const Scalar dw = f / denom;
    w -= dw;
    if (w < Scalar(-1)) w = Scalar(-1);
    if (abs(dw) <= Scalar(1e-14) * (Scalar(1) + abs(w))) break;
  }
  return w;
}

}  // namespace sircap
