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

#include "sircap/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "sircap/control.hpp"
#include "sircap/dynamics.hpp"
#include "sircap/errors.hpp"

namespace sircap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

// Window of width `width` centred on `c`, kept inside [lo, hi].
std::pair<double, double> window(double c, double width, double lo, double hi) {
  width = std::min(width, hi - lo);
  const double a = std::clamp(c - 0.5 * width, lo, hi - width);
  return {a, a + width};
}

struct Search {
  const EpidemicParams& params;
  const ArcFamily& family;
  const OracleOptions& opts;
  State entry;  // state at family.t1 when there is an arc

  Search(const EpidemicParams& p, const ArcFamily& f, const OracleOptions& o)
      : params(p), family(f), opts(o) {
    entry = initial_state(p);
    if (f.has_arc && f.t1 > 0.0) {
      entry = propagate(p, ControlSchedule({{ConstantSigma{p.sigma_f}, 0.0, f.t1}}), o.solver.step, 0.0, entry);
    }
  }

  bool arc_before(double t2) const { return family.has_arc && t2 > family.t1; }

  // Fills one lattice row (fixed t2).
  void row(double t2, const std::vector<double>& fractions, SurfacePoint* out) const {
    const double T = params.horizon_T;
    const double step = opts.solver.step;
    const double cap = params.cap_K + opts.cap_tol;
    for (std::size_t j = 0; j < fractions.size(); ++j) out[j] = {t2, 0.0, kNaN, false};

    double max_y = params.y0;
    const auto track = [&max_y](double, const State& s) { max_y = std::max(max_y, s(1)); };
    State at_t2 = initial_state(params);
    const bool arc = arc_before(t2);
    if (arc) {
      const double x_exit = entry(0) - params.gamma * family.level * (t2 - family.t1);
      // Holding y needs sigma = 1/x <= sigma_f.
      if (!(x_exit * params.sigma_f >= 1.0 - 1e-12)) {
        fill_mu(t2, fractions, 0.0, out);
        return;
      }
      std::vector<ControlSegment> segs;
      if (family.t1 > 0.0) segs.push_back({ConstantSigma{params.sigma_f}, 0.0, family.t1});
      segs.push_back({BoundaryArc{entry(0), family.t1, params.gamma, family.level}, family.t1, t2});
      max_y = std::max(max_y, family.t1 > 0.0 ? entry(1) : params.y0);
      at_t2 = propagate(params, ControlSchedule(segs), step, 0.0, initial_state(params), track);
    } else if (t2 > 0.0) {
      at_t2 = propagate(params, ControlSchedule({{ConstantSigma{params.sigma_f}, 0.0, t2}}), step, 0.0,
                        initial_state(params), track);
    }
    const double prefix_max = max_y;

    const double v_free = at_t2(2) + params.sigma_f * (T - t2);
    const double mu_budget = (v_free - params.budget()) / (params.sigma_f - params.sigma_s);
    double scale = std::min(T - t2, mu_budget);
    if (!(scale > 0.0)) scale = std::max(0.0, T - t2);
    fill_mu(t2, fractions, scale, out);

    for (std::size_t j = 0; j < fractions.size(); ++j) {
      SurfacePoint& p = out[j];
      State terminal = at_t2;
      max_y = prefix_max;
      if (t2 < T) {
        const ControlSchedule schedule =
            boundary_lockdown(params, arc ? family.t1 : t2, entry(0), family.level, t2, p.mu);
        terminal = propagate(params, schedule, step, t2, at_t2, track);
      }
      p.x_inf = payoff(params, terminal);
      p.feasible = max_y <= cap && terminal(2) >= params.budget() - opts.budget_tol;
    }
  }

  static void fill_mu(double t2, const std::vector<double>& fractions, double scale, SurfacePoint* out) {
    for (std::size_t j = 0; j < fractions.size(); ++j) out[j] = {t2, fractions[j] * scale, kNaN, false};
  }

  SearchGrid pass(std::vector<double> t2s, std::vector<double> fractions) const {
    SearchGrid g;
    g.t2_values = std::move(t2s);
    g.mu_fractions = std::move(fractions);
    const std::size_t m = g.mu_fractions.size();
    g.results.resize(g.t2_values.size() * m);
    parallel_for(g.t2_values.size(), opts.workers, [&](std::size_t i) {
      try {
        row(g.t2_values[i], g.mu_fractions, g.results.data() + i * m);
      } catch (const ArcOverrunError&) {
        // Row stays infeasible.
      } catch (const NumericalFailure&) {
      }
    });
    return g;
  }
};

// Lowest lattice index among the maximal feasible points.
std::optional<std::size_t> argmax(const SearchGrid& g) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < g.results.size(); ++k) {
    const SurfacePoint& p = g.results[k];
    if (!p.feasible || std::isnan(p.x_inf)) continue;
    if (!best || p.x_inf > g.results[*best].x_inf) best = k;
  }
  return best;
}

std::optional<double> free_hit_time(const EpidemicParams& params, const SolverOptions& opts) {
  const Trajectory free_run = integrate_from(params, constant_schedule(params, params.sigma_f), opts.step,
                                             0.0, initial_state(params), Events::kSkip);
  return locate_event(free_run, {EventSpecKind::kYHitsLevelRising, params.cap_K}, 0.0,
                      params.horizon_T, opts.event_tol);
}

}  // namespace

std::size_t OracleResult::surface_size() const {
  std::size_t n = 0;
  for (const SearchGrid& g : passes) n += g.results.size();
  return n;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
  if (n <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

OracleResult grid_search(const EpidemicParams& params, const ArcFamily& family, const OracleOptions& opts) {
  validate(params);
  if (opts.t2_count < 2 || opts.mu_count < 2) throw ParameterError("oracle lattice needs >= 2 points per axis");
  const double T = params.horizon_T;
  const Search search(params, family, opts);

  OracleResult out;
  double t2_lo = 0.0, t2_hi = T, f_lo = 0.0, f_hi = 1.0;
  std::optional<std::size_t> best_pass, best_index;
  for (std::size_t pass = 0; pass <= opts.zoom_passes; ++pass) {
    SearchGrid g = search.pass(linspace(t2_lo, t2_hi, opts.t2_count), linspace(f_lo, f_hi, opts.mu_count));
    g.t1_mode = SearchGrid::T1Mode::kFixedAtHit;
    const std::optional<std::size_t> k = argmax(g);
    out.t2_spacing = (t2_hi - t2_lo) / static_cast<double>(opts.t2_count - 1);
    out.passes.push_back(std::move(g));
    if (!k) {
      if (pass == 0) break;
      continue;
    }
    const SearchGrid& cur = out.passes.back();
    if (!best_index || cur.results[*k].x_inf > out.passes[*best_pass].results[*best_index].x_inf) {
      best_pass = pass;
      best_index = k;
    }
    // Zoom around the best point seen so far.
    const SearchGrid& bg = out.passes[*best_pass];
    const std::size_t i = *best_index / opts.mu_count;
    const std::size_t j = *best_index % opts.mu_count;
    std::tie(t2_lo, t2_hi) = window(bg.t2_values[i], 0.1 * (t2_hi - t2_lo), 0.0, T);
    std::tie(f_lo, f_hi) = window(bg.mu_fractions[j], 0.1 * (f_hi - f_lo), 0.0, 1.0);
  }
  if (!best_index) throw InfeasibleError("oracle: no feasible lattice point");
  out.best = out.passes[*best_pass].results[*best_index];
  const SearchGrid& bg = out.passes[*best_pass];
  const double f_step = (bg.mu_fractions.back() - bg.mu_fractions.front()) /
                        static_cast<double>(opts.mu_count - 1);
  const double f = bg.mu_fractions[*best_index % opts.mu_count];
  out.mu_spacing = f > 0.0 ? out.best.mu / f * f_step : 0.0;
  return out;
}

OracleResult grid_search(const EpidemicParams& params, const OracleOptions& opts) {
  validate(params);
  const std::optional<double> hit = free_hit_time(params, opts.solver);
  ArcFamily family;
  if (hit) family = {*hit, params.cap_K, true};
  OracleResult out = grid_search(params, family, opts);
  out.t_hit = hit;
  return out;
}

T1Profile sweep_t1(const EpidemicParams& params, std::size_t t1_count, double t1_max,
                   const OracleOptions& inner) {
  validate(params);
  T1Profile out;
  out.t_hit = free_hit_time(params, inner.solver);
  const Trajectory free_run = integrate_from(params, constant_schedule(params, params.sigma_f),
                                             inner.solver.step, 0.0, initial_state(params), Events::kSkip);
  for (double t1 : linspace(0.0, std::min(t1_max, params.horizon_T), t1_count)) {
    T1Sample s{t1, kNaN, false, 0.0, 0.0};
    const double level = free_run.at(t1)(1);
    if (level <= params.cap_K + inner.cap_tol) {
      try {
        const OracleResult r = grid_search(params, ArcFamily{t1, level, true}, inner);
        s = {t1, r.best.x_inf, true, r.best.t2, r.best.mu};
      } catch (const InfeasibleError&) {
      }
    }
    out.samples.push_back(s);
  }
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    const T1Sample& s = out.samples[k];
    if (s.feasible && (!out.samples[out.best].feasible || s.x_inf > out.samples[out.best].x_inf)) out.best = k;
  }
  return out;
}

double finite_diff(const std::function<double(double)>& f, double point, double h) {
  return (f(point + h) - f(point - h)) / (2.0 * h);
}

}  // namespace sircap
