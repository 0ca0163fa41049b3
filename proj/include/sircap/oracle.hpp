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

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "sircap/params.hpp"
#include "sircap/policy.hpp"

namespace sircap {

// Brute-force search over the family
//   sigma_f on [0, t1], y held at `level` on (t1, t2], sigma_s on (t2, t2 + mu], sigma_f after,
// where the arc is present only for t2 > t1. Every point is simulated and
// checked against the cap and the budget; nothing from the case analysis is
// used.

struct OracleOptions {
  std::size_t t2_count = 100;
  std::size_t mu_count = 100;
  std::size_t zoom_passes = 2;   // each shrinks both windows 10x around the argmax
  unsigned workers = 1;
  double cap_tol = 1e-6;         // y <= K + cap_tol counts as feasible
  double budget_tol = 1e-9;
  SolverOptions solver;
};

struct SurfacePoint {
  double t2 = 0.0;
  double mu = 0.0;
  double x_inf = 0.0;  // NaN when the path could not be simulated
  bool feasible = false;
};

// The lattices of one pass. mu values are fractions of the largest budget-
// compatible strict phase, min(T - t2, (v(T; mu = 0) - budget) / (sigma_f - sigma_s)).
struct SearchGrid {
  enum class T1Mode { kFixedAtHit, kSwept };
  std::vector<double> t2_values;
  std::vector<double> mu_fractions;
  T1Mode t1_mode = T1Mode::kFixedAtHit;
  std::vector<SurfacePoint> results;  // row-major: t2 index, then mu index
};

struct OracleResult {
  SurfacePoint best;
  std::optional<double> t_hit;  // first time sigma == sigma_f reaches K
  std::vector<SearchGrid> passes;
  double t2_spacing = 0.0;      // of the last pass
  double mu_spacing = 0.0;      // in time units at the argmax
  std::size_t surface_size() const;
};

struct ArcFamily {
  double t1 = 0.0;
  double level = 0.0;
  bool has_arc = false;
};

// Searches (t2, mu) with the arc entered at the first time the free run
// (sigma == sigma_f) reaches K. Throws InfeasibleError when no lattice point
// is feasible.
OracleResult grid_search(const EpidemicParams& params, const OracleOptions& opts = {});

// Same search for an explicit arc entry (t1, level).
OracleResult grid_search(const EpidemicParams& params, const ArcFamily& family,
                         const OracleOptions& opts);

struct T1Sample {
  double t1 = 0.0;
  double x_inf = 0.0;
  bool feasible = false;
  double t2 = 0.0;
  double mu = 0.0;
};

struct T1Profile {
  std::vector<T1Sample> samples;
  std::optional<double> t_hit;
  std::size_t best = 0;  // index into samples
};

// For each t1 on an even lattice over [0, t1_max], holds y at y(t1) from t1
// on and runs the inner (t2, mu) search.
T1Profile sweep_t1(const EpidemicParams& params, std::size_t t1_count, double t1_max,
                   const OracleOptions& inner);

// (f(p + h) - f(p - h)) / (2 h).
double finite_diff(const std::function<double(double)>& f, double point, double h);

// Runs `body(i)` for i in [0, count) on `workers` threads. Exceptions are
// rethrown (the one with the lowest index) after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace sircap
