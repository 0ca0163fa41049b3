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

#include "sircap/sweep.hpp"

#include <cmath>

#include "sircap/constrained.hpp"
#include "sircap/errors.hpp"
#include "sircap/pmp.hpp"

namespace sircap {
namespace {

PolicyCase case_at(const EpidemicParams& base, double tau, const SolverOptions& opts) {
  EpidemicParams p = base;
  p.tau = tau;
  return solve_constrained(p, opts).case_label;
}

}  // namespace

std::vector<double> tau_lattice(double tau_from, double tau_to, double tau_step) {
  if (!(tau_step > 0.0)) throw ParameterError("tau step must be > 0");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double tau = tau_from + static_cast<double>(i) * tau_step;
    if (tau > tau_to + 1e-9) break;
    out.push_back(tau);
  }
  return out;
}

std::vector<SweepRow> sweep_tau(const EpidemicParams& base, const std::vector<double>& taus,
                                const SweepOptions& opts) {
  std::vector<SweepRow> rows(taus.size());
  // Parallel over tau; the oracle inside each row runs single-threaded.
  OracleOptions oracle = opts.oracle;
  oracle.workers = 1;
  parallel_for(taus.size(), opts.workers, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.tau = taus[i];
    EpidemicParams p = base;
    p.tau = taus[i];
    try {
      const ConstrainedPolicy c = solve_constrained(p, opts.solver);
      row.case_label = c.case_label;
      row.t1 = c.t1;
      row.t2 = c.t2;
      row.mu = c.mu;
      row.x_inf = c.x_inf_achieved;
      row.feasible = c.hypotheses.feasible;
      row.pmp_ok = verify_pmp(p, c, opts.solver).passed();
      if (opts.with_oracle) {
        oracle.solver = opts.solver;
        const OracleResult r = grid_search(p, oracle);
        row.oracle_t2 = r.best.t2;
        row.oracle_mu = r.best.mu;
        row.oracle_x_inf = r.best.x_inf;
      }
    } catch (const Error& e) {
      row.case_label.reset();
      row.error = e.what();
    }
  });
  return rows;
}

std::vector<CaseTransition> find_transitions(const EpidemicParams& base, const std::vector<SweepRow>& rows,
                                             const SweepOptions& opts) {
  struct Bracket {
    double lo, hi;
    PolicyCase a, b;
  };
  std::vector<Bracket> brackets;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const SweepRow& l = rows[i - 1];
    const SweepRow& r = rows[i];
    if (l.case_label && r.case_label && *l.case_label != *r.case_label) {
      brackets.push_back({l.tau, r.tau, *l.case_label, *r.case_label});
    }
  }
  std::vector<std::vector<CaseTransition>> found(brackets.size());
  parallel_for(brackets.size(), opts.workers, [&](std::size_t k) {
    // A bracket may hide more than one change (a narrow case between two
    // lattice points): after locating the first, continue with the rest.
    Bracket rest = brackets[k];
    while (rest.a != rest.b) {
      Bracket b = rest;
      while (b.hi - b.lo > opts.transition_tol) {
        const double mid = 0.5 * (b.lo + b.hi);
        const PolicyCase c = case_at(base, mid, opts.solver);
        if (c == b.a) {
          b.lo = mid;
        } else {
          b.hi = mid;
          b.b = c;
        }
      }
      found[k].push_back({b.a, b.b, 0.5 * (b.lo + b.hi), b.hi - b.lo});
      rest = {b.hi, rest.hi, b.b, rest.b};
    }
  });
  std::vector<CaseTransition> out;
  for (const auto& f : found) out.insert(out.end(), f.begin(), f.end());
  return out;
}

}  // namespace sircap
