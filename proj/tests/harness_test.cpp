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

#include "dtactive/harness.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "dtactive/errors.hpp"

namespace dtactive::harness {
namespace {

using RolloutSetup = Setup;

constexpr double kDeg = 180.0 / std::numbers::pi;

RolloutSetup quietSetup() {
  RolloutSetup s;
  s.world.noise_sigma = 0.0;
  return s;
}

std::vector<Trajectory> fakeDataset(const HarnessConfig& h) {
  std::vector<Trajectory> out;
  for (const auto& id : h.trained) {
    for (std::size_t k = 0; k < h.speeds.size(); ++k) {
      Trajectory t;
      t.object_id = id;
      t.seed = k;
      out.push_back(t);
    }
  }
  for (const auto& id : h.novel) {
    Trajectory t;
    t.object_id = id;
    out.push_back(t);
  }
  return out;
}

TEST(Split, SizesAndPartition) {
  const HarnessConfig h;
  const auto data = fakeDataset(h);
  ASSERT_EQ(data.size(), 39u);
  const Split s = split(data, h, 1);
  EXPECT_EQ(s.train.size(), 27u);
  EXPECT_EQ(s.test.size(), 12u);
  std::set<const Trajectory*> seen(s.train.begin(), s.train.end());
  for (const auto* t : s.test) EXPECT_TRUE(seen.insert(t).second);
  EXPECT_EQ(seen.size(), data.size());
  // one test trajectory per trained object, novel objects test-only
  std::map<std::string, int> tests;
  for (const auto* t : s.test) ++tests[t->object_id];
  for (const auto& [id, n] : tests) EXPECT_EQ(n, 1) << id;
  for (const auto* t : s.train) EXPECT_NE(t->object_id[0], 'N');
}

TEST(Split, SeededAndReproducible) {
  const HarnessConfig h;
  const auto data = fakeDataset(h);
  EXPECT_EQ(split(data, h, 4).test, split(data, h, 4).test);
  bool differs = false;
  for (std::uint64_t seed = 5; seed < 10 && !differs; ++seed) {
    differs = split(data, h, seed).test != split(data, h, 4).test;
  }
  EXPECT_TRUE(differs);
}

TEST(Split, MalformedDataset) {
  const HarnessConfig h;
  auto data = fakeDataset(h);
  data.pop_back();
  EXPECT_THROW(split(data, h, 1), DatasetError);
  data = fakeDataset(h);
  data.erase(data.begin());
  EXPECT_THROW(split(data, h, 1), DatasetError);
  data = fakeDataset(h);
  data[0].object_id = "Q7";
  EXPECT_THROW(split(data, h, 1), DatasetError);
}

TEST(Collect, ProtocolShape) {
  RolloutSetup setup = quietSetup();
  setup.harness.trained = {"A1"};
  setup.harness.novel = {"N1"};
  const auto data = collect(setup);
  ASSERT_EQ(data.size(), 5u);
  const char* profiles[] = {"const:0.2", "const:0.35", "const:0.5",
                            "const:0.65"};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(data[k].object_id, "A1");
    EXPECT_EQ(data[k].profile, profiles[k]);
  }
  EXPECT_EQ(data[4].object_id, "N1");
  EXPECT_EQ(data[4].profile, "const:0.5");
  for (const auto& t : data) {
    EXPECT_FALSE(t.failed) << t.object_id << " " << t.failure;
    EXPECT_GE(t.frames.back().theta_gt, 2.0 * std::numbers::pi);
  }
}

TEST(Collect, CircleDeadReckoningAndOracleReplay) {
  const RolloutSetup setup = quietSetup();
  const Trajectory t = collectOne(world::libraryObject("A1"), 0.5, setup, 0);
  ASSERT_FALSE(t.failed) << t.failure;
  const auto raw = replayTheta(t, ReplayMode::kRaw, nullptr, setup);
  double worst = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    worst = std::max(worst, std::abs(raw[i] - t.frames[i].theta_gt));
  }
  EXPECT_LT(worst * kDeg, 2.0);
  EXPECT_LT(meanAbsErrorDeg(t, replayTheta(t, ReplayMode::kOracle, nullptr,
                                           setup)),
            1e-6);
  // raw replay reproduces the logged online estimate
  for (std::size_t i = 0; i < raw.size(); ++i) {
    EXPECT_NEAR(raw[i], t.frames[i].theta_hat, 1e-9);
  }
  EXPECT_THROW(replayTheta(t, ReplayMode::kModel, nullptr, setup),
               DomainError);
}

TEST(Collect, SameSeedSameTrajectory) {
  const RolloutSetup setup;
  const auto a = collectOne(world::libraryObject("C1"), 0.65, setup, 3);
  const auto b = collectOne(world::libraryObject("C1"), 0.65, setup, 3);
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    EXPECT_EQ(a.frames[i].theta_gt, b.frames[i].theta_gt);
    EXPECT_EQ(a.frames[i].pooled, b.frames[i].pooled);
  }
}

TEST(Persistence, RoundTripReplaysExactly) {
  const RolloutSetup setup;
  const Trajectory t = collectOne(world::libraryObject("B2"), 0.65, setup, 1);
  const auto files = encodeTrajectory(t, "B2_1.bin", "seed=1");
  const Trajectory back = decodeTrajectory(files.csv, files.features,
                                           setup.features);
  EXPECT_EQ(back.object_id, t.object_id);
  EXPECT_EQ(back.profile, t.profile);
  ASSERT_EQ(back.frames.size(), t.frames.size());
  const auto a = replayTheta(t, ReplayMode::kOracle, nullptr, setup);
  const auto b = replayTheta(back, ReplayMode::kOracle, nullptr, setup);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(back.frames[i].pooled, t.frames[i].pooled);
    EXPECT_NEAR(a[i], b[i], 1e-6);
  }
  EXPECT_THROW(decodeTrajectory(files.csv, "short", setup.features),
               std::exception);
}

TEST(Samples, LabelsAndRoles) {
  const RolloutSetup setup;
  const Trajectory t = collectOne(world::libraryObject("A3"), 0.35, setup, 1);
  const std::vector<const Trajectory*> one = {&t};
  const auto n = samples(one, learning::Role::kRectifier, setup.features);
  const auto pi = samples(one, learning::Role::kPolicy, setup.features);
  ASSERT_EQ(n.size(), t.frames.size() - 1);
  ASSERT_EQ(pi.size(), n.size());
  const auto& f = t.frames[10];
  EXPECT_DOUBLE_EQ(n[9].label, f.omega_gt / f.omega_c);
  EXPECT_EQ(n[9].label, pi[9].label);
  EXPECT_DOUBLE_EQ(n[9].features.scalar(),
                   std::abs(f.omega_c) / setup.features.omega_max);
  EXPECT_DOUBLE_EQ(pi[9].features.scalar(),
                   std::abs(f.omega_gt) / setup.features.omega_max);
}

TEST(Metrics, Rmse) {
  const std::vector<double> a = {1, 2, 3, 4};
  std::vector<double> b = a;
  EXPECT_EQ(rmse(a, b), 0.0);
  for (auto& v : b) v += 5.0;
  EXPECT_DOUBLE_EQ(rmse(a, b), 5.0);
  EXPECT_THROW(rmse(a, {1, 2}), DomainError);
  EXPECT_THROW(rmse({}, {}), DomainError);
}

TEST(Metrics, RmsOfSine) {
  std::vector<double> d;
  for (int i = 0; i < 1600; ++i) d.push_back(desiredTrajectory(i * 0.05, 180.0, 40.0));
  const std::vector<double> zero(d.size(), 0.0);
  EXPECT_NEAR(rmse(d, zero), 127.27922061357856, 1e-3 * 127.28);
}

TEST(Metrics, Jerk) {
  std::vector<double> ramp;
  std::vector<double> quad;
  std::vector<double> sine;
  for (int i = 0; i < 1600; ++i) {
    const double t = i * 0.05;
    ramp.push_back(3.0 * t - 1.0);
    // exactly representable samples of a quadratic in t
    quad.push_back(0.75 * i * i - 13.0 * i + 2.0);
    sine.push_back(desiredTrajectory(t, 180.0, 40.0));
  }
  EXPECT_NEAR(rmsJerk(ramp, 0.05), 0.0, 1e-9);
  EXPECT_NEAR(rmsJerk(quad, 0.05), 0.0, 1e-9);
  // rounded samples: third differences of ~1 ulp, divided by dt^3
  std::vector<double> rounded;
  for (int i = 0; i < 1600; ++i) {
    const double t = i * 0.05;
    rounded.push_back(2.5 * t * t - 4.0 * t + 7.0);
  }
  EXPECT_LT(rmsJerk(rounded, 0.05), 1e-6);
  EXPECT_NEAR(rmsJerk(sine, 0.05), 0.49330684124969204, 0.02 * 0.4933);
  EXPECT_THROW(rmsJerk({1, 2, 3}, 0.05), DomainError);
}

TEST(Desired, Values) {
  EXPECT_EQ(desiredTrajectory(0.0, 180.0, 40.0), 0.0);
  EXPECT_DOUBLE_EQ(desiredTrajectory(10.0, 180.0, 40.0), 180.0);
  EXPECT_THROW(desiredTrajectory(1.0, 180.0, 0.0), DomainError);
}

TEST(Online, NullTrajectory) {
  RolloutSetup setup = quietSetup();
  setup.harness.amplitude = 0.0;
  setup.harness.periods = 1;
  setup.harness.period = 10.0;
  const auto r = evalOnline(world::libraryObject("A1"), Mode::kOpenLoop,
                            nullptr, nullptr, setup);
  ASSERT_FALSE(r.failed) << r.failure;
  EXPECT_LT(r.rmse_deg, 1e-6);
  EXPECT_LT(r.rms_jerk, 1e-3);
}

TEST(Online, OursNeedsModels) {
  const RolloutSetup setup;
  EXPECT_THROW(evalOnline(world::libraryObject("A1"), Mode::kOurs, nullptr,
                          nullptr, setup),
               std::exception);
  EXPECT_EQ(parseMode(modeName(Mode::kOurs)), Mode::kOurs);
  EXPECT_THROW(parseMode("closed"), std::exception);
}

}  // namespace
}  // namespace dtactive::harness
