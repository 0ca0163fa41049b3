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

#include "sircap/params.hpp"

#include <cmath>
#include <string>

#include "sircap/errors.hpp"

namespace sircap {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError("invalid parameters: " + what);
}

}  // namespace

void validate(const EpidemicParams& p, Validation mode) {
  require(std::isfinite(p.gamma) && p.gamma > 0.0, "gamma must be > 0");
  require(std::isfinite(p.sigma_s) && p.sigma_s >= 0.0, "sigma_s must be >= 0");
  require(std::isfinite(p.sigma_f) && p.sigma_s < p.sigma_f, "sigma_s < sigma_f required");
  require(p.sigma_s < 1.0, "sigma_s < 1 required");
  require(std::isfinite(p.horizon_T) && p.horizon_T > 0.0, "horizon_T must be > 0");
  require(std::isfinite(p.tau) && p.tau >= 0.0 && p.tau < p.horizon_T,
          "0 <= tau < horizon_T required");
  require(std::isfinite(p.cap_K) && p.cap_K > 0.0, "cap_K must be > 0");
  require(std::isfinite(p.x0) && p.x0 > 0.0, "x0 must be > 0");
  if (mode == Validation::kStrict) {
    require(std::isfinite(p.y0) && p.y0 > 0.0, "y0 must be > 0");
  } else {
    require(std::isfinite(p.y0) && p.y0 >= 0.0, "y0 must be >= 0");
  }
  require(p.x0 + p.y0 <= 1.0 + 1e-15, "x0 + y0 <= 1 required");
  if (!(p.y0 < p.cap_K)) throw InfeasibleError("y0 >= cap_K: the cap is violated at t = 0");
}

}  // namespace sircap
