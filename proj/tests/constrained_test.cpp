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

#include "sircap/constrained.hpp"
#include "sircap/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "sircap/oracle.hpp"
#include "support.hpp"

namespace sircap {
namespace {

using testing::scenario;

struct Geometry : ::testing::Test {
  static const RegionGeometry& k03(double tau) {
    static std::map<double, RegionGeometry> cache;
    auto it = cache.find(tau);
    if (it == cache.end()) {
      const EpidemicParams p = scenario(0.03, tau);
      it = cache.emplace(tau, compute_geometry(p, *hitting_time_tb(p))).first;
    }
    return it->second;
  }
};

TEST(HittingTime, ReferenceValues) {
  EXPECT_NEAR(*hitting_time_tb(scenario(0.03, 40.0)), 212.93, 0.01);
  EXPECT_NEAR(*hitting_time_tb(scenario(0.06, 40.0)), 242.63, 0.01);
  EXPECT_FALSE(hitting_time_tb(scenario(1.0, 40.0)).has_value());
  EXPECT_FALSE(hitting_time_tb(scenario(0.06, 80.0)).has_value());
}

TEST_F(Geometry, CharacteristicTimes) {
  const RegionGeometry& g = k03(40.0);
  EXPECT_NEAR(g.t_m, 290.4, 0.05);
  EXPECT_LT(g.t_b, g.t_m);
  EXPECT_LE(g.t_f, g.t_m);
  EXPECT_GE(g.t_c, g.t_b);
  EXPECT_LE(g.t_c, g.t_f);
  EXPECT_GT(g.x_b() * 1.5, 1.0);
  EXPECT_NEAR(g.entry_state(1), 0.03, 1e-6);
}

TEST_F(Geometry, BudgetBound) {
  for (double tau : {40.0, 110.0, 140.0}) {
    const EpidemicParams p = scenario(0.03, tau);
    const RegionGeometry& g = k03(tau);
    EXPECT_NEAR(F_of(g.t_b, g, p), tau, 1e-12);
    EXPECT_NEAR(G_of(g.t_b, g, p), std::min(tau, 365.0 - g.t_b), 1e-12);
    if (g.t_f < g.t_m) EXPECT_NEAR(F_of(g.t_f, g, p), 0.0, 1e-6);
    EXPECT_GE(F_of(g.t_f, g, p), -1e-9);
    if (g.t_c > g.t_b && g.t_c < g.t_f) EXPECT_NEAR(F_of(g.t_c, g, p), 365.0 - g.t_c, 1e-6);
    EXPECT_THROW(F_of(g.t_m + 1.0, g, p), ArcOverrunError);
  }
}

TEST_F(Geometry, FDecreasingAndHorizonSumIncreasing) {
  const EpidemicParams p = scenario(0.03, 110.0);
  const RegionGeometry& g = k03(110.0);
  double prev_f = INFINITY, prev_h = -INFINITY;
  for (int i = 0; i < 50; ++i) {
    const double t2 = g.t_b + (g.t_m - g.t_b) * i / 49.0;
    const double f = F_of(t2, g, p);
    EXPECT_LT(f, prev_f);
    EXPECT_GT(f + t2, prev_h);
    prev_f = f;
    prev_h = f + t2;
  }
}

TEST_F(Geometry, TcOrdersTheCases) {
  // tau = 40: the budget bound is always the shorter one, t_c = t_f.
  EXPECT_DOUBLE_EQ(k03(40.0).t_c, k03(40.0).t_f);
  // Larger tau moves t_c back towards t_b.
  EXPECT_LT(k03(140.0).t_c, k03(110.0).t_c);
  EXPECT_LT(k03(110.0).t_c, k03(40.0).t_c);
}

TEST_F(Geometry, WbSignProperties) {
  const double inv_gk = 1.0 / (0.1 * 0.03);
  for (double tau : {40.0, 110.0, 140.0}) {
    const EpidemicParams p = scenario(0.03, tau);
    const RegionGeometry& g = k03(tau);
    EXPECT_GT(w_b(g.t_b, g, p), 0.0);
    EXPECT_LE(w_b(g.t_f, g, p), 0.0);
    int changes = 0;
    double prev = w_b(g.t_b, g, p);
    for (int i = 1; i < 50; ++i) {
      const double cur = w_b(g.t_b + (g.t_c - g.t_b) * i / 49.0, g, p);
      if ((cur > 0) != (prev > 0)) ++changes;
      prev = cur;
    }
    EXPECT_LE(changes, 1) << tau;
    if (g.t_c < g.t_f) {
      double last = INFINITY;
      for (int i = 0; i < 50; ++i) {
        const double t2 = g.t_c + (g.t_f - g.t_c) * i / 49.0;
        const double G = G_of(t2, g, p);
        const double yT = capped_trajectory(p, g, t2, G).terminal()(1);
        const double v = (w_b(t2, g, p) - inv_gk) * yT;
        EXPECT_LT(v, last + 1e-12) << tau << " " << t2;
        last = v;
      }
    }
  }
}

TEST(SolveConstrained, ReferenceScenarios) {
  struct Row {
    double tau;
    PolicyCase c;
    double t2, mu;
  };
  for (const Row& r : {Row{40.0, PolicyCase::k2_1, 286.8, 16.5}, Row{110.0, PolicyCase::k2_2, 277.8, 87.2},
                       Row{140.0, PolicyCase::k2_3, 277.2, 87.8}}) {
    const ConstrainedPolicy c = solve_constrained(scenario(0.03, r.tau));
    EXPECT_EQ(c.case_label, r.c) << r.tau;
    EXPECT_NEAR(c.t1, 212.93, 0.5);
    EXPECT_NEAR(c.t2, r.t2, 0.5) << r.tau;
    EXPECT_NEAR(c.mu, r.mu, 0.5) << r.tau;
    EXPECT_TRUE(c.hypotheses.verified()) << r.tau;
  }
}

TEST(SolveConstrained, ZeroOfWbAtReferenceTime) {
  const EpidemicParams p = scenario(0.03, 40.0);
  const ConstrainedPolicy c = solve_constrained(p);
  EXPECT_NEAR(w_b(c.t2, *c.geometry, p), 0.0, 1e-2);
  EXPECT_NEAR(c.t2, 286.8, 0.5);
}

TEST(SolveConstrained, LooseCapPassesThrough) {
  for (double tau : {40.0, 80.0, 150.0}) {
    const EpidemicParams p = scenario(1.0, tau);
    const ConstrainedPolicy c = solve_constrained(p);
    const UnconstrainedPolicy u = solve_unconstrained(p);
    EXPECT_FALSE(is_capped(c.case_label));
    EXPECT_EQ(c.case_label, u.case_label);
    EXPECT_EQ(c.t2, u.t0);
    EXPECT_EQ(c.mu, u.mu0);
    EXPECT_FALSE(c.geometry.has_value());
  }
}

TEST(SolveConstrained, FeasibleAndDominated) {
  for (double K : {0.03, 0.06}) {
    for (double tau : {40.0, 80.0, 110.0, 123.8, 140.0, 150.0}) {
      const EpidemicParams p = scenario(K, tau);
      const ConstrainedPolicy c = solve_constrained(p);
      const Trajectory tr = integrate(p, c.schedule);
      EXPECT_LE(tr.max_infected(), K + 1e-6);
      EXPECT_GE(tr.terminal()(2), p.budget() - 1e-6);
      EXPECT_LE(c.mu, tau + 1e-9);
      EXPECT_LE(c.t2 + c.mu, 365.0 + 1e-9);
      if (c.t2 > c.t1) {
        for (Eigen::Index i = tr.index_at(c.t1); i <= tr.index_at(c.t2); ++i) {
          if (tr.t(i) <= c.t1 + 1e-9 || tr.t(i) >= c.t2 - 1e-9) continue;
          EXPECT_NEAR(tr.states(1, i), K, 1e-6);
          EXPECT_GT(tr.sigma(i), p.sigma_s);
          EXPECT_LT(tr.sigma(i), p.sigma_f + 1e-9);
        }
      }
      if (is_capped(c.case_label)) {
        EXPECT_LT(c.x_inf_achieved, c.unconstrained.x_inf_achieved);
      } else {
        EXPECT_EQ(c.x_inf_achieved, c.unconstrained.x_inf_achieved);
      }
    }
  }
}

TEST(SolveConstrained, TcOrdersCaseLabels) {
  for (double tau = 20.0; tau <= 155.0; tau += 15.0) {
    const ConstrainedPolicy c = solve_constrained(scenario(0.03, tau));
    ASSERT_TRUE(c.geometry);
    const RegionGeometry& g = *c.geometry;
    if (g.t_c == g.t_b) {
      EXPECT_NE(c.case_label, PolicyCase::k2_1);
      EXPECT_NE(c.case_label, PolicyCase::k2_2);
    }
    if (g.t_c == g.t_f) EXPECT_EQ(c.case_label, PolicyCase::k2_1) << tau;
  }
}

TEST(DJdMu, PositiveAndMatchesFiniteDifference) {
  const EpidemicParams p = scenario(0.03, 40.0);
  const ConstrainedPolicy c = solve_constrained(p);
  const RegionGeometry& g = *c.geometry;
  for (double t2 : {250.0, 270.0, 286.0}) {
    const double G = G_of(t2, g, p);
    for (double frac : {0.2, 0.5, 0.9}) {
      const PolicyShape shape{g.t_b, g.x_b(), t2, frac * G};
      const double d = dJ_dmu(shape, p);
      EXPECT_GT(d, 0.0);
      const double fd = finite_diff(
          [&](double mu) { return payoff(p, schedule_of(p, PolicyShape{g.t_b, g.x_b(), t2, mu}), kDefaultStep); },
          shape.mu, 1e-4);
      EXPECT_LT(testing::rel_err(fd, d), 1e-4) << t2 << " " << frac;
    }
  }
}

TEST(DJdMu, VanishesAsControlsMerge) {
  EpidemicParams p = scenario(0.03, 40.0);
  p.sigma_s = p.sigma_f - 1e-9;
  EXPECT_NEAR(dJ_dmu(PolicyShape{250.0, 1.0, 250.0, 20.0}, p), 0.0, 1e-10);
}

TEST(JTilde, DerivativeSignAndFiniteDifference) {
  for (double tau : {40.0, 140.0}) {
    const EpidemicParams p = scenario(0.03, tau);
    const ConstrainedPolicy c = solve_constrained(p);
    const RegionGeometry& g = *c.geometry;
    const auto jt = [&](double t2) { return payoff(p, capped_schedule(p, g, t2, G_of(t2, g, p)), kDefaultStep); };
    for (int i = 1; i < 10; ++i) {
      const double t2 = g.t_b + (g.t_f - g.t_b) * i / 10.0;
      if (std::abs(t2 - g.t_c) < 0.01) continue;
      const auto d = jtilde_derivative(t2, g, p);
      ASSERT_TRUE(d);
      const double wb = w_b(t2, g, p);
      if (t2 < g.t_c) EXPECT_EQ(*d > 0, wb > 0);
      const double h = t2 < g.t_c ? -1e-3 : 1e-3;  // stay on one side of t_c
      const double fd = (jt(t2 + h) - jt(t2)) / h;
      EXPECT_LT(testing::rel_err(fd, *d), 1e-3) << tau << " " << t2;
    }
    EXPECT_FALSE(jtilde_derivative(g.t_c, g, p).has_value());
    if (c.case_label != PolicyCase::k2_2) EXPECT_NEAR(*jtilde_derivative(c.t2, g, p), 0.0, 1e-5);
  }
}

TEST(JTilde, UnimodalAlongUpperBorder) {
  const EpidemicParams p = scenario(0.03, 110.0);
  const ConstrainedPolicy c = solve_constrained(p);
  const RegionGeometry& g = *c.geometry;
  int turns = 0;
  double prev = -INFINITY, prev_diff = 1.0;
  for (int i = 0; i < 50; ++i) {
    const double t2 = g.t_b + (g.t_f - g.t_b) * i / 49.0;
    const double v = payoff(p, capped_schedule(p, g, t2, G_of(t2, g, p)), kDefaultStep);
    if (i > 0) {
      const double diff = v - prev;
      if ((diff > 0) != (prev_diff > 0)) ++turns;
      prev_diff = diff;
    }
    prev = v;
  }
  EXPECT_LE(turns, 1);
}

TEST(S0, InsideRegion) {
  const EpidemicParams p = scenario(0.03, 40.0);
  const RegionGeometry g = compute_geometry(p, *hitting_time_tb(p));
  const auto s0 = compute_s0(g, p);
  ASSERT_TRUE(s0);
  EXPECT_GE(*s0, g.t_b);
  EXPECT_LE(*s0, g.t_c);
}

}  // namespace
}  // namespace sircap
