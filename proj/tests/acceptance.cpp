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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sircap/constrained.hpp"
#include "sircap/errors.hpp"
#include "sircap/final_size.hpp"
#include "sircap/oracle.hpp"
#include "sircap/pmp.hpp"
#include "sircap/sweep.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace sircap;
using testing::scenario;

namespace {

struct Criterion {
  int number;
  bool ok = true;
  std::vector<std::string> details;

  void check(bool cond, const std::string& what) {
    if (!cond) ok = false;
    details.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  }
  void print() const {
    std::printf("criterion %d: %s\n", number, ok ? "PASS" : "FAIL");
    for (const std::string& d : details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

const double kTaus[] = {40.0, 80.0, 110.0, 123.8, 140.0, 150.0};

struct Sweep {
  std::vector<SweepRow> rows;
  std::vector<CaseTransition> transitions;
};

Sweep run_sweep(double K) {
  SweepOptions opts;
  opts.workers = workers();
  Sweep s;
  const EpidemicParams base = scenario(K, 40.0);
  s.rows = sweep_tau(base, tau_lattice(0.0, 155.0, 1.0), opts);
  s.transitions = find_transitions(base, s.rows, opts);
  return s;
}

const CaseTransition* find(const Sweep& s, PolicyCase from, PolicyCase to) {
  for (const CaseTransition& t : s.transitions) {
    if (t.from == from && t.to == to) return &t;
  }
  return nullptr;
}

void expect_transition(Criterion& c, const Sweep& s, PolicyCase from, PolicyCase to, double at, double tol) {
  const CaseTransition* t = find(s, from, to);
  const std::string name = std::string(to_string(from)) + "->" + std::string(to_string(to));
  if (!t) {
    c.check(false, name + " transition not found");
    return;
  }
  c.check(std::abs(t->tau - at) <= tol, name + fmt(" at tau=%.4f, expected %.2f +- %.1f", t->tau, at, tol));
}

void expect_policy(Criterion& c, double K, double tau, PolicyCase label, double t2, double mu) {
  const ConstrainedPolicy p = solve_constrained(scenario(K, tau));
  const bool ok = p.case_label == label && std::abs(p.t2 - t2) <= 0.5 && std::abs(p.mu - mu) <= 0.5;
  c.check(ok, fmt("K=%.2f tau=%g: ", K, tau) + std::string(to_string(p.case_label)) +
                  fmt(" (t2, mu)=(%.4f, %.4f), expected ", p.t2, p.mu) + std::string(to_string(label)) +
                  fmt(" (%.1f, %.1f) +- 0.5", t2, mu));
}

Criterion criterion1(const Sweep& s) {
  Criterion c{1};
  const ConstrainedPolicy p = solve_constrained(scenario(0.03, 40.0));
  c.check(std::abs(p.t1 - 212.93) <= 0.5, fmt("t1*=%.4f, expected 212.93 +- 0.5", p.t1));
  expect_policy(c, 0.03, 40.0, PolicyCase::k2_1, 286.8, 16.5);
  expect_policy(c, 0.03, 110.0, PolicyCase::k2_2, 277.8, 87.2);
  expect_policy(c, 0.03, 140.0, PolicyCase::k2_3, 277.2, 87.8);
  expect_transition(c, s, PolicyCase::k2_1, PolicyCase::k2_2, 108.9, 1.0);
  expect_transition(c, s, PolicyCase::k2_2, PolicyCase::k2_3, 110.9, 1.0);
  return c;
}

Criterion criterion2(const Sweep& s) {
  Criterion c{2};
  const auto tb = hitting_time_tb(scenario(0.06, 40.0));
  c.check(tb && std::abs(*tb - 242.63) <= 0.5, fmt("t1*=%.4f, expected 242.63 +- 0.5", tb.value_or(NAN)));
  expect_policy(c, 0.06, 80.0, PolicyCase::k1_2, 242.2, 80.0);
  expect_policy(c, 0.06, 123.8, PolicyCase::k1_3, 241.2, 123.8);
  expect_policy(c, 0.06, 150.0, PolicyCase::k1_4, 241.0, 124.0);
  expect_transition(c, s, PolicyCase::k2_1, PolicyCase::k1_2, 70.0, 2.0);
  expect_transition(c, s, PolicyCase::k1_2, PolicyCase::k1_3, 123.75, 0.5);
  expect_transition(c, s, PolicyCase::k1_3, PolicyCase::k1_4, 123.93, 1.5);
  return c;
}

Criterion criterion3() {
  Criterion c{3};
  OracleOptions opts;
  opts.zoom_passes = 3;
  opts.workers = workers();
  for (double K : {0.03, 0.06}) {
    for (double tau : kTaus) {
      const EpidemicParams p = scenario(K, tau);
      const ConstrainedPolicy th = solve_constrained(p);
      const OracleResult o = grid_search(p, opts);
      const double dt = std::abs(o.best.t2 - th.t2), dm = std::abs(o.best.mu - th.mu);
      const double dx = std::abs(o.best.x_inf - th.x_inf_achieved);
      c.check(dt <= 0.1 && dm <= 0.1 && dx <= 1e-6,
              fmt("K=%.2f tau=%g: ", K, tau) + fmt("|dt2|=%.2e |dmu|=%.2e |dx_inf|=%.2e", dt, dm, dx));
    }
  }
  return c;
}

Criterion criterion4() {
  Criterion c{4};
  // grid against long integration
  std::vector<std::array<double, 3>> grid;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.05 + 0.1 * i;
    for (int j = 0; j < 10; ++j) {
      const double y = (1.0 - x) * 1e-4 * std::pow(0.9e4, j / 9.0);
      for (double sigma : {0.5, 0.8, 1.5, 2.5, 4.0}) grid.push_back({x, y, sigma});
    }
  }
  std::vector<double> err(grid.size());
  parallel_for(grid.size(), workers(), [&](std::size_t k) {
    const auto [x, y, sigma] = grid[k];
    err[k] = std::abs(x_infinity(x, y, sigma).x_inf - testing::long_run_x_inf(x, y, sigma));
  });
  const double worst = *std::max_element(err.begin(), err.end());
  c.check(worst <= 1e-6, fmt("long-run grid %g points: max |err|=%.2e (tol 1e-6)", grid.size(), worst));

  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_res = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = 0.01 + 0.98 * u(rng);
    const double y = (1.0 - x) * u(rng) + 1e-9;
    const double sigma = 0.1 + 3.9 * u(rng);
    const double xi = x_infinity(x, y, sigma).x_inf;
    worst_res = std::max(worst_res, std::abs(xi - rho(x, y, sigma) * std::exp(sigma * xi)));
  }
  c.check(worst_res <= 1e-10, fmt("fixed-point residual on 1000 samples: max %.2e (tol 1e-10)", worst_res));

  // relative error, scale floored at 1e-3 since dx_inf/dx vanishes at x = 1/sigma
  double worst_dx = 0.0, worst_dy = 0.0;
  const double h = 1e-6;
  int n = 0;
  while (n < 200) {
    const double x = 0.1 + 0.8 * u(rng);
    const double y = 0.01 + (0.95 - x) * 0.9 * u(rng);
    const double sigma = 0.5 + 2.5 * u(rng);
    if (x + y + h > 1.0) continue;
    ++n;
    const auto xi = [&](double a, double b) { return x_infinity(a, b, sigma).x_inf; };
    const double fx = (xi(x + h, y) - xi(x - h, y)) / (2 * h);
    const double fy = (xi(x, y + h) - xi(x, y - h)) / (2 * h);
    const double dx = dxinf_dx(x, y, sigma), dy = dxinf_dy(x, y, sigma);
    worst_dx = std::max(worst_dx, std::abs(fx - dx) / std::max(std::abs(dx), 1e-3));
    worst_dy = std::max(worst_dy, std::abs(fy - dy) / std::max(std::abs(dy), 1e-3));
  }
  c.check(worst_dx <= 1e-5 && worst_dy <= 1e-5,
          fmt("partials vs central differences on 200 samples: rel %.2e (x), %.2e (y), tol 1e-5", worst_dx,
              worst_dy));
  return c;
}

struct Capped {
  EpidemicParams p;
  RegionGeometry g;
};

std::vector<Capped> capped_scenarios() {
  std::vector<Capped> out;
  for (double K : {0.03, 0.06}) {
    for (double tau : kTaus) {
      const EpidemicParams p = scenario(K, tau);
      const ConstrainedPolicy c = solve_constrained(p);
      // K = 0.06 only has a boundary arc at tau = 40
      if (c.geometry) out.push_back({p, *c.geometry});
    }
  }
  return out;
}

std::string label(const EpidemicParams& p) { return fmt("K=%.2f tau=%g", p.cap_K, p.tau); }

Criterion criterion5() {
  Criterion c{5};
  const std::vector<Capped> sc = capped_scenarios();
  for (const Capped& s : sc) {
    const EpidemicParams& p = s.p;
    const RegionGeometry& g = s.g;
    const double inv_gk = 1.0 / (p.gamma * p.cap_K);

    bool mono = true;
    double prev_f = INFINITY, prev_h = -INFINITY;
    for (int i = 0; i < 50; ++i) {
      const double t2 = g.t_b + (g.t_m - g.t_b) * i / 50.0;
      const double f = F_of(t2, g, p);
      mono = mono && f < prev_f && f + t2 > prev_h;
      prev_f = f;
      prev_h = f + t2;
    }
    c.check(mono, label(p) + ": F decreasing, F + t2 increasing on 50 points of [t_b, t_m)");

    const double wb_b = w_b(g.t_b, g, p), wb_f = w_b(g.t_f, g, p);
    c.check(wb_b > 0.0 && wb_f <= 0.0, label(p) + fmt(": w_b(t1*)=%.4g > 0, w_b(t_f)=%.4g <= 0", wb_b, wb_f));

    int changes = 0;
    double prev = wb_b;
    for (int i = 1; i < 50; ++i) {
      const double cur = w_b(g.t_b + (g.t_c - g.t_b) * i / 49.0, g, p);
      if ((cur > 0) != (prev > 0)) ++changes;
      prev = cur;
    }
    c.check(changes <= 1, label(p) + fmt(": w_b sign changes on [t1*, t_c]: %g", changes));

    if (g.t_c < g.t_f) {
      bool dec = true;
      double last = INFINITY;
      for (int i = 0; i < 50; ++i) {
        const double t2 = g.t_c + (g.t_f - g.t_c) * i / 49.0;
        const double yT = capped_trajectory(p, g, t2, G_of(t2, g, p)).terminal()(1);
        const double v = (w_b(t2, g, p) - inv_gk) * yT;
        dec = dec && v < last + 1e-12;
        last = v;
      }
      c.check(dec, label(p) + ": (w_b - 1/(gamma K)) y(T) decreasing on [t_c, t_f]");
    }
  }

  // dJ/dmu on feasible points of the region, against finite differences of the simulated payoff
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int sampled = 0, positive = 0;
  double worst = 0.0;
  while (sampled < 100) {
    const Capped& s = sc[sampled % sc.size()];
    const EpidemicParams& p = s.p;
    const RegionGeometry& g = s.g;
    const double t2 = g.t_b + (g.t_f - g.t_b) * u(rng);
    const double mu = G_of(t2, g, p) * (0.02 + 0.96 * u(rng));
    const PolicyShape shape{g.t_b, g.x_b(), t2, mu};
    const Trajectory tr = integrate(p, schedule_of(p, shape));
    if (tr.max_infected() > p.cap_K + 1e-6 || tr.terminal()(2) < p.budget() - 1e-6) continue;
    ++sampled;
    const double d = dJ_dmu(shape, p);
    if (d > 0.0) ++positive;
    const double fd = finite_diff(
        [&](double m) { return payoff(p, schedule_of(p, PolicyShape{g.t_b, g.x_b(), t2, m}), kDefaultStep); }, mu,
        1e-4);
    worst = std::max(worst, testing::rel_err(fd, d));
  }
  c.check(positive == 100, fmt("dJ/dmu > 0 on %g of 100 feasible samples", positive));
  c.check(worst <= 1e-4, fmt("dJ/dmu vs finite differences: max rel %.2e (tol 1e-4)", worst));

  // sign of J~' from the simulated payoff against the w_b formula
  int agree = 0, total = 0;
  for (const Capped& s : sc) {
    if (!(s.p.cap_K == 0.03 && (s.p.tau == 40.0 || s.p.tau == 140.0))) continue;
    const EpidemicParams& p = s.p;
    const RegionGeometry& g = s.g;
    const double inv_gk = 1.0 / (p.gamma * p.cap_K);
    const auto jt = [&](double t2) { return payoff(p, capped_schedule(p, g, t2, G_of(t2, g, p)), kDefaultStep); };
    for (int i = 0; i < 25; ++i) {
      double t2 = g.t_b + (g.t_f - g.t_b) * (i + 0.5) / 25.0;
      if (std::abs(t2 - g.t_c) < 0.01) t2 += 0.02;
      const double h = t2 < g.t_c ? -1e-3 : 1e-3;
      const double fd = (jt(t2 + h) - jt(t2)) / h;
      const double formula = t2 < g.t_c ? w_b(t2, g, p) : w_b(t2, g, p) - inv_gk;
      ++total;
      if ((fd > 0) == (formula > 0)) ++agree;
    }
  }
  c.check(agree == total, fmt("J~' sign matches w_b formula on %g of %g points", agree, total));
  return c;
}

Criterion criterion6() {
  Criterion c{6};
  const std::pair<double, double> headline[] = {{0.03, 40.0}, {0.03, 110.0}, {0.03, 140.0},
                                                {0.06, 80.0}, {0.06, 123.8}, {0.06, 150.0}};
  for (const auto& [K, tau] : headline) {
    const EpidemicParams p = scenario(K, tau);
    const PmpReport r = verify_pmp(p, solve_constrained(p));
    std::string failed;
    double ham = 0.0;
    for (const ConditionCheck& ch : r.checks) {
      if (!ch.passed) failed += " " + ch.name;
      if (ch.name == "hamiltonian_constant") ham = ch.worst;
    }
    c.check(r.passed(), label(p) + fmt(": hamiltonian variation %.2e", ham) +
                            (failed.empty() ? "" : ", failed:" + failed));
  }
  return c;
}

bool trajectory_feasible(const EpidemicParams& p, const ConstrainedPolicy& pol, std::string& why) {
  const Trajectory tr = integrate(p, pol.schedule);
  bool ok = true;
  if (tr.max_infected() > p.cap_K + 1e-6) ok = false, why += fmt(" max y=%.8f", tr.max_infected());
  if (tr.terminal()(2) < p.budget() - 1e-6) ok = false, why += fmt(" v(T)=%.6f", tr.terminal()(2));
  if (pol.t2 > pol.t1) {
    for (Eigen::Index i = 0; i < tr.size(); ++i) {
      if (tr.t(i) <= pol.t1 + 1e-9 || tr.t(i) >= pol.t2 - 1e-9) continue;
      if (!(tr.sigma(i) > p.sigma_s && tr.sigma(i) < p.sigma_f)) {
        ok = false;
        why += fmt(" arc sigma %.6f at t=%.3f", tr.sigma(i), tr.t(i));
        break;
      }
    }
  }
  return ok;
}

Criterion criterion7(const Sweep& s03, const Sweep& s06) {
  Criterion c{7};
  for (double K : {0.03, 0.06}) {
    for (double tau : kTaus) {
      const EpidemicParams p = scenario(K, tau);
      std::string why;
      c.check(trajectory_feasible(p, solve_constrained(p), why), label(p) + why);
    }
  }
  // sweep rows: flagged feasible ones must pass, flagged infeasible ones must have no feasible oracle point
  OracleOptions probe;
  probe.t2_count = 50;
  probe.mu_count = 50;
  probe.zoom_passes = 0;
  probe.workers = workers();
  for (const Sweep* s : {&s03, &s06}) {
    const double K = s == &s03 ? 0.03 : 0.06;
    int checked = 0, bad = 0, flagged = 0, confirmed = 0;
    std::string why;
    for (const SweepRow& row : s->rows) {
      const EpidemicParams p = scenario(K, row.tau);
      if (row.feasible) {
        ++checked;
        std::string w;
        if (!trajectory_feasible(p, solve_constrained(p), w)) ++bad, why += fmt(" tau=%g", row.tau) + w;
        continue;
      }
      ++flagged;
      try {
        grid_search(p, probe);
      } catch (const InfeasibleError&) {
        ++confirmed;
      }
    }
    c.check(bad == 0, fmt("K=%.2f sweep: %g policies reported feasible, %g violate", K, checked, bad) + why);
    c.check(confirmed == flagged,
            fmt("K=%.2f sweep: %g taus reported infeasible, oracle finds no feasible point for %g", K, flagged,
                confirmed));
  }
  return c;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SIRCAP_CLI) + " " + args + " >>" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// metadata records the invocation, so the worker count is allowed to differ there
std::string comparable(const fs::path& p, bool ignore_workers) {
  if (!ignore_workers || p.filename() != "metadata.json") return slurp(p);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(slurp(p));
  j.erase("workers");
  return j.dump();
}

bool same_files(const fs::path& a, const fs::path& b, bool ignore_workers, std::string& diff) {
  bool same = true;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || comparable(e.path(), ignore_workers) != comparable(other, ignore_workers)) {
      same = false;
      diff += " " + e.path().filename().string();
    }
  }
  return same;
}

Criterion criterion8() {
  Criterion c{8};
  const fs::path dir = fs::temp_directory_path() / ("sircap_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path log = dir / "cli.log";
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"cap_K": 0.03, "tau": 110, "oracle_t2_count": 50, "oracle_mu_count": 50,
                            "oracle_zoom_passes": 1})";
  const std::string base = "--config " + cfg.string() + " --out ";

  struct Pair {
    std::string what, command, a, b, flags_a, flags_b;
  };
  for (const Pair& pr : {Pair{"solve run twice", "solve", "s1", "s2", "", ""},
                         Pair{"sweep-tau workers 1 vs 4", "sweep-tau", "w1", "w4", " --workers 1", " --workers 4"},
                         Pair{"oracle workers 1 vs 4", "oracle", "o1", "o4", " --workers 1", " --workers 4"}}) {
    const fs::path da = dir / pr.a, db = dir / pr.b;
    const int ra = run_cli(pr.command + " " + base + da.string() + pr.flags_a, log);
    const int rb = run_cli(pr.command + " " + base + db.string() + pr.flags_b, log);
    std::string diff;
    const bool same = ra == 0 && rb == 0 && same_files(da, db, !pr.flags_a.empty(), diff) &&
                      same_files(db, da, !pr.flags_a.empty(), diff);
    c.check(same, pr.what + fmt(": exit %g/%g", ra, rb) + (same ? ", byte-identical" : ", differs:" + diff));
  }
  if (c.ok) fs::remove_all(dir);
  else c.details.push_back("outputs kept in " + dir.string());
  return c;
}

}  // namespace

int main() {
  bool all = true;
  const auto report = [&](const Criterion& c) {
    c.print();
    all = all && c.ok;
  };
  try {
    const Sweep s03 = run_sweep(0.03);
    const Sweep s06 = run_sweep(0.06);
    report(criterion1(s03));
    report(criterion2(s06));
    report(criterion3());
    report(criterion4());
    report(criterion5());
    report(criterion6());
    report(criterion7(s03, s06));
    report(criterion8());
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s\n", all ? "all criteria PASS" : "some criteria FAIL");
  return all ? 0 : 1;
}
