// Copyright 2026 The DTactive Sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dtactive/control.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dtactive/errors.hpp"

namespace dtactive::control {
namespace {

constexpr double kDt = 0.05;

// Grip and position loops on a static rotation command; returns the depth
// sum and contact centroid per tick.
struct Trace {
  std::vector<double> depth_sum;
  std::vector<double> centroid;
};

Trace holdLoop(const char* id, double x0, double initial_depth, int ticks) {
  world::WorldConfig wc;
  wc.noise_sigma = 0.0;
  const Gains g;
  ControlState st;
  world::WorldState s =
      world::makeInitialState(world::libraryObject(id), initial_depth, x0);
  Trace tr;
  for (int i = 0; i < ticks; ++i) {
    const auto l = world::renderDepth(s, world::Side::kLeft, wc);
    const auto r = world::renderDepth(s, world::Side::kRight, wc);
    const auto sum = estimator::summarize(l, r, s.gap);
    tr.depth_sum.push_back(sum.depth_sum);
    tr.centroid.push_back(sum.centroid_x);
    s = world::step(s, holdOmegaStep(0.0, sum, g, st, kDt), wc);
  }
  return tr;
}

TEST(GripPd, SignAndZero) {
  const Gains g;
  ControlState st;
  EXPECT_EQ(gripPd(g.s_ref, g, st, kDt), 0.0);
  st.reset();
  EXPECT_LT(gripPd(0.5 * g.s_ref, g, st, kDt), 0.0);
  st.reset();
  EXPECT_GT(gripPd(2.0 * g.s_ref, g, st, kDt), 0.0);
  st.reset();
  EXPECT_LE(std::abs(gripPd(-1e9, g, st, kDt)), g.v_gap_max);
}

TEST(GripPd, SettlesOnCircle) {
  // start lightly indented; the loop must reach S_ref within 2 s
  const Gains g;
  const Trace tr = holdLoop("A1", 0.0, 0.2, 60);
  for (std::size_t i = 40; i < tr.depth_sum.size(); ++i) {
    EXPECT_NEAR(tr.depth_sum[i], g.s_ref, 0.05 * g.s_ref) << "tick " << i;
  }
}

TEST(OrientationPd, ZeroOddAndClamped) {
  const Gains g;
  ControlState a;
  ControlState b;
  EXPECT_EQ(orientationPd(0.3, 0.3, g, a, kDt), 0.0);
  a.reset();
  EXPECT_EQ(orientationPd(0.1, 0.0, g, a, kDt),
            -orientationPd(-0.1, 0.0, g, b, kDt));
  a.reset();
  EXPECT_EQ(orientationPd(100.0, 0.0, g, a, kDt), g.omega_max);
}

TEST(PositionPd, ZeroOddAndRecenters) {
  const Gains g;
  ControlState a;
  ControlState b;
  EXPECT_EQ(positionPd(g.x_center, g, a, kDt), 0.0);
  a.reset();
  EXPECT_EQ(positionPd(2.0, g, a, kDt), -positionPd(-2.0, g, b, kDt));

  const Trace tr = holdLoop("A2", 5.0, 0.5, 60);
  EXPECT_GT(std::abs(tr.centroid.front()), 4.0);
  EXPECT_LT(std::abs(tr.centroid.back() - g.x_center), 1.0);
}

TEST(InvertRatio, IdentityAndClamp) {
  Gains g;
  const auto id = invertRatio(0.4, 1.0, g);
  EXPECT_EQ(id.omega_c, 0.4);
  g.omega_max = 1.0;
  const auto low = invertRatio(1.0, 0.01, g);
  EXPECT_EQ(low.u, 0.1);
  EXPECT_DOUBLE_EQ(low.omega_c, 10.0);
  EXPECT_EQ(invertRatio(1.0, 9.0, g).u, g.u_max);
  EXPECT_THROW(invertRatio(1.0, std::nan(""), g), ControlError);
}

TEST(BeltCommands, Evaluation) {
  const auto a = beltCommands(0.5, 40.0, 0.0);
  EXPECT_DOUBLE_EQ(a.v_left, 10.0);
  EXPECT_DOUBLE_EQ(a.v_right, 10.0);
  const auto b = beltCommands(0.0, 40.0, 3.0);
  EXPECT_EQ(b.v_left, 3.0);
  EXPECT_EQ(b.v_right, -3.0);
  EXPECT_THROW(beltCommands(0.1, 0.0, 0.0), DomainError);
}

TEST(BeltCommands, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  std::uniform_real_distribution<double> d(5.0, 60.0);
  std::uniform_real_distribution<double> c(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double omega = w(rng);
    const double dobj = d(rng);
    const auto v = beltCommands(omega, dobj, c(rng));
    EXPECT_NEAR(estimator::commandOmega(v.v_left, v.v_right, dobj), omega,
                1e-12);
  }
}

TEST(Saturate, KeepsTheMix) {
  Gains g;
  const auto v = saturate({40.0, 10.0}, g);
  EXPECT_DOUBLE_EQ(v.v_left, g.v_belt_max);
  EXPECT_DOUBLE_EQ(v.v_right, 0.25 * g.v_belt_max);
  const auto same = saturate({1.0, -2.0}, g);
  EXPECT_EQ(same.v_left, 1.0);
}

TEST(ControlStep, ZeroErrorsGiveZeroOutputs) {
  const Gains g;
  ControlState st;
  TickInput in;
  in.summary.valid = true;
  in.summary.depth_sum = g.s_ref;
  in.summary.d_obj = 30.0;
  in.summary.centroid_x = g.x_center;
  const auto cmd = controlStep(in, g, nullptr, st, kDt);
  EXPECT_EQ(cmd.v_left, 0.0);
  EXPECT_EQ(cmd.v_right, 0.0);
  EXPECT_EQ(cmd.v_gap, 0.0);
  EXPECT_EQ(st.u, 1.0);
}

TEST(ControlStep, Deterministic) {
  const Gains g;
  TickInput in;
  in.theta_d = 0.4;
  in.summary.depth_sum = 1200.0;
  in.summary.d_obj = 30.0;
  in.summary.centroid_x = 1.0;
  ControlState a;
  ControlState b;
  for (int i = 0; i < 5; ++i) {
    const auto x = controlStep(in, g, nullptr, a, kDt);
    const auto y = controlStep(in, g, nullptr, b, kDt);
    EXPECT_EQ(x.v_left, y.v_left);
    EXPECT_EQ(x.v_right, y.v_right);
    EXPECT_EQ(x.v_gap, y.v_gap);
  }
}

TEST(ControlStep, PolicyNeedsMapsAndRole) {
  const Gains g;
  ControlState st;
  TickInput in;
  in.summary.d_obj = 30.0;
  learning::FeatureConfig fc;
  const auto pi =
      learning::ModelParams::zeros(learning::Role::kPolicy, {fc.length(), 1});
  EXPECT_THROW(controlStep(in, g, &pi, st, kDt), ControlError);
  const auto n =
      learning::ModelParams::zeros(learning::Role::kRectifier, {fc.length(), 1});
  const world::DepthMap m{32, 24, 0.4, 1.5, std::vector<double>(32 * 24)};
  EXPECT_THROW(policyInvert(0.1, m, m, n, g), ControlError);
  // zero weights -> u = 0.6
  EXPECT_NEAR(policyInvert(0.3, m, m, pi, g).u, 0.6, 1e-12);
}

TEST(Gains, Validate) {
  Gains g;
  EXPECT_NO_THROW(g.validate());
  g.u_min = 0.0;
  EXPECT_THROW(g.validate(), DomainError);
}

}  // namespace
}  // namespace dtactive::control
