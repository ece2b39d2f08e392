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

#include "dtactive/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "dtactive/errors.hpp"

namespace dtactive::learning {
namespace {

world::DepthMap blank(int w, int h) {
  return {w, h, 0.4, 1.5, std::vector<double>(w * h, 0.0)};
}

Sample randomSample(std::mt19937_64& rng, int len) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Sample s;
  for (int i = 0; i < len; ++i) s.features.values.push_back(u(rng));
  s.omega_command = 0.5;
  s.label = 0.2 + 0.9 * u(rng);
  return s;
}

TEST(Features, ZeroMaps) {
  const FeatureConfig fc;
  const auto f = featurize(blank(32, 24), blank(32, 24), 0.0, fc);
  ASSERT_EQ(static_cast<int>(f.size()), fc.length());
  EXPECT_EQ(fc.length(), 385);
  for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(Features, SaturatedMapPoolsToOne) {
  const FeatureConfig fc;
  auto m = blank(115, 86);
  std::fill(m.values.begin(), m.values.end(), fc.d_max);
  const auto p = poolMaps(m, m, fc);
  for (double v : p) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Features, DeltaLandsInOneCell) {
  const FeatureConfig fc;
  auto l = blank(32, 24);
  l.values[5 * 32 + 9] = 0.75;  // row 5, col 9 -> cell (2, 4)
  const auto p = poolMaps(l, blank(32, 24), fc);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == 2 * 16 + 4) {
      EXPECT_DOUBLE_EQ(p[i], 0.75 / 4.0 / 1.5);
    } else {
      EXPECT_EQ(p[i], 0.0) << i;
    }
  }
}

TEST(Features, StraddlingPixelIsSplitByArea) {
  const FeatureConfig fc;
  // 40 columns over 16 cells: 2.5 px per cell, pixel 2 straddles 0 | 1
  auto l = blank(40, 24);
  l.values[2] = 1.5;
  const auto p = poolMaps(l, blank(40, 24), fc);
  EXPECT_DOUBLE_EQ(p[0], 0.1);
  EXPECT_DOUBLE_EQ(p[1], 0.1);
  EXPECT_DOUBLE_EQ(std::accumulate(p.begin(), p.end(), 0.0), 0.2);
}

TEST(Features, NegativeOmegaIsTheMirrorImage) {
  const FeatureConfig fc;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  auto l = blank(115, 86);
  auto r = blank(115, 86);
  for (auto& v : l.values) v = u(rng);
  for (auto& v : r.values) v = u(rng);
  auto flip = [](world::DepthMap m) {
    for (int i = 0; i < m.height; ++i) {
      std::reverse(m.values.begin() + i * m.width,
                   m.values.begin() + (i + 1) * m.width);
    }
    return m;
  };
  const auto reverse = featurize(l, r, -0.4, fc);
  const auto forward = featurize(flip(l), flip(r), 0.4, fc);
  ASSERT_EQ(reverse.size(), forward.size());
  for (std::size_t i = 0; i < reverse.size(); ++i) {
    EXPECT_NEAR(reverse.values[i], forward.values[i], 1e-12) << i;
  }
  EXPECT_DOUBLE_EQ(reverse.scalar(), 0.4);
}

TEST(Features, Mismatch) {
  const FeatureConfig fc;
  EXPECT_THROW(poolMaps(blank(32, 24), blank(33, 24), fc), DomainError);
  EXPECT_THROW(poolMaps(blank(8, 8), blank(8, 8), fc), DomainError);
  EXPECT_THROW(assemble(std::vector<double>(10), 0.1, fc), DomainError);
}

TEST(Forward, ZeroWeightsGiveMidRange) {
  const auto m = ModelParams::zeros(Role::kRectifier, {5, 3, 1});
  const std::vector<double> x = {1, -2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(forward(m, x), 0.6);
  EXPECT_THROW(forward(m, std::vector<double>(4)), DomainError);
}

TEST(Forward, BoundedAndDeterministic) {
  const auto m = ModelParams::initialize(Role::kPolicy, {6, 8, 1}, 9);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(6);
    for (auto& v : x) v = n(rng);
    const double y = forward(m, x);
    EXPECT_GE(y, 0.0);
    EXPECT_LE(y, kOutputScale);
    EXPECT_EQ(y, forward(m, x));
  }
}

TEST(Loss, ZeroAtTheLabel) {
  const auto m = ModelParams::zeros(Role::kRectifier, {4, 3, 1});
  std::vector<Sample> batch(3);
  for (auto& s : batch) {
    s.features.values = {0.1, 0.2, 0.3, 0.4};
    s.label = 0.6;
  }
  const auto lg = lossAndGrad(m, std::span<const Sample>(batch));
  EXPECT_NEAR(lg.loss, 0.0, 1e-15);
  for (double g : lg.grad) EXPECT_NEAR(g, 0.0, 1e-15);
  EXPECT_THROW(lossAndGrad(m, std::span<const Sample>()), std::exception);
}

TEST(GradCheck, RandomSmallModels) {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto m = ModelParams::initialize(Role::kRectifier, {12, 8, 6, 1},
                                           1000 + i);
    const Sample s = randomSample(rng, 12);
    worst = std::max(worst, gradCheck(m, s, 1e-5));
    EXPECT_GE(loss(m, std::span<const Sample>(&s, 1)), 0.0);
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(GradCheck, LinearModelIsExact) {
  std::mt19937_64 rng(2);
  const auto m = ModelParams::initialize(Role::kRectifier, {7, 1}, 4,
                                         Activation::kIdentity,
                                         OutputHead::kIdentity);
  EXPECT_LT(gradCheck(m, randomSample(rng, 7), 1e-5), 1e-10);
}

TEST(GradCheck, ZeroStep) {
  std::mt19937_64 rng(2);
  const auto m = ModelParams::initialize(Role::kRectifier, {3, 1}, 4);
  EXPECT_THROW(gradCheck(m, randomSample(rng, 3), 0.0), DomainError);
}

std::vector<Sample> toyData(std::uint64_t seed, int n, int len) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) out.push_back(randomSample(rng, len));
  return out;
}

TEST(Train, ConstantLabel) {
  auto data = toyData(1, 256, 10);
  for (auto& s : data) s.label = 0.83;
  TrainConfig cfg;
  cfg.hidden = {8};
  cfg.epochs = 300;
  cfg.learning_rate = 1e-2;
  const auto r = trainDetailed(data, cfg, Role::kRectifier);
  EXPECT_LT(r.epoch_loss.back(), r.initial_loss);
  EXPECT_EQ(r.samples_used, data.size());
  for (const auto& s : data) EXPECT_NEAR(forward(r.model, s.features), 0.83, 0.02);
}

TEST(Train, StandardizedModelTakesRawFeatures) {
  // label follows a feature whose raw scale is tiny
  auto data = toyData(5, 400, 6);
  for (auto& s : data) {
    s.features.values[2] *= 1e-3;
    s.label = 0.3 + 500.0 * s.features.values[2];
  }
  TrainConfig cfg;
  cfg.hidden = {16};
  cfg.epochs = 300;
  cfg.learning_rate = 3e-3;
  cfg.standardize = true;
  const auto m = train(data, cfg, Role::kRectifier);
  EXPECT_LT(loss(m, data), 2e-3);
}

TEST(Train, OmegaFloorDropsSamples) {
  auto data = toyData(2, 50, 4);
  for (int i = 0; i < 20; ++i) data[i].omega_command = 0.001;
  TrainConfig cfg;
  cfg.hidden = {4};
  cfg.epochs = 2;
  EXPECT_EQ(trainDetailed(data, cfg, Role::kRectifier).samples_used, 30u);
}

TEST(Train, SameSeedSameWeights) {
  const auto data = toyData(3, 128, 5);
  TrainConfig cfg;
  cfg.hidden = {6, 4};
  cfg.epochs = 5;
  for (Optimizer o : {Optimizer::kAdam, Optimizer::kMomentum}) {
    cfg.optimizer = o;
    EXPECT_EQ(train(data, cfg, Role::kPolicy), train(data, cfg, Role::kPolicy));
  }
  auto other = cfg;
  other.seed = 2;
  EXPECT_NE(train(data, cfg, Role::kPolicy), train(data, other, Role::kPolicy));
}

TEST(Train, RejectsBadConfig) {
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), std::exception);
  EXPECT_THROW(parseOptimizer("rmsprop"), std::exception);
  EXPECT_EQ(parseOptimizer(optimizerName(Optimizer::kMomentum)),
            Optimizer::kMomentum);
}

TEST(Checkpoint, RoundTripIsExact) {
  const auto m = ModelParams::initialize(Role::kPolicy, {9, 5, 1}, 77);
  const auto back = readCheckpoint(writeCheckpoint(m, "seed=1"));
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.role(), Role::kPolicy);
  EXPECT_THROW(readCheckpoint("garbage"), std::exception);
}

TEST(Roles, Names) {
  EXPECT_STREQ(roleName(Role::kRectifier), "N");
  EXPECT_EQ(parseRole("pi"), Role::kPolicy);
  EXPECT_THROW(parseRole("x"), LearningError);
}

}  // namespace
}  // namespace dtactive::learning
