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

#include "sircap/dynamics.hpp"
#include "sircap/errors.hpp"

namespace sircap {

// Composite Simpson rule for f(t, state) over [a, b] on the trajectory's own
// mesh. Both ends must be mesh points; each segment piece inside [a, b] must
// span an even number of (uniform) steps.
template <typename F>
double simpson(const Trajectory& tr, double a, double b, F&& f) {
  if (b <= a) return 0.0;
  const Eigen::Index ia = tr.index_at(a);
  const Eigen::Index ib = tr.index_at(b);
  double total = 0.0;
  Eigen::Index start = ia;
  while (start < ib) {
    const std::uint32_t seg = tr.step_segment[static_cast<std::size_t>(start)];
    Eigen::Index stop = start;
    while (stop < ib && tr.step_segment[static_cast<std::size_t>(stop)] == seg) ++stop;
    const Eigen::Index n = stop - start;
    if (n % 2 != 0) throw InternalError("simpson: odd step count inside a segment");
    const double h = (tr.t(stop) - tr.t(start)) / static_cast<double>(n);
    double acc = f(tr.t(start), tr.state(start)) + f(tr.t(stop), tr.state(stop));
    for (Eigen::Index k = 1; k < n; ++k) {
      acc += (k % 2 == 1 ? 4.0 : 2.0) * f(tr.t(start + k), tr.state(start + k));
    }
    total += acc * h / 3.0;
    start = stop;
  }
  return total;
}

}  // namespace sircap
