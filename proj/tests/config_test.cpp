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

#include "dtactive/config.hpp"

#include <gtest/gtest.h>

namespace dtactive::config {
namespace {

std::string rangeKey(const std::string& text) {
  try {
    parseConfigText(text);
  } catch (const ConfigRangeError& e) {
    return e.key();
  }
  return "";
}

TEST(Config, EmptyIsDefaults) {
  EXPECT_EQ(parseConfigText(""), RunConfig{});
  EXPECT_EQ(parseConfigText("  \n"), RunConfig{});
  EXPECT_EQ(parseConfigText("{}"), RunConfig{});
}

TEST(Config, PartialOverride) {
  const auto cfg = parseConfigText(
      R"({"seed": 9, "world": {"mu": 0.5}, "training": {"hidden": [8, 4],
          "optimizer": "momentum"}})");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.world.mu, 0.5);
  EXPECT_EQ(cfg.world.dt, world::WorldConfig{}.dt);
  EXPECT_EQ(cfg.training.hidden, (std::vector<int>{8, 4}));
  EXPECT_EQ(cfg.training.optimizer, learning::Optimizer::kMomentum);
}

TEST(Config, RangeErrorsNameTheKey) {
  EXPECT_EQ(rangeKey(R"({"world": {"dt": -1}})"), "world.dt");
  EXPECT_EQ(rangeKey(R"({"gains": {"u_min": 0}})"), "gains.u_min");
  EXPECT_EQ(rangeKey(R"({"training": {"optimizer": "sgd"}})"),
            "training.optimizer");
  EXPECT_EQ(rangeKey(R"({"world": {"gap_min": 90}})"), "world.gap_max");
}

TEST(Config, ParseErrors) {
  EXPECT_THROW(parseConfigText("{"), ConfigParseError);
  EXPECT_THROW(parseConfigText("[1, 2]"), ConfigParseError);
  EXPECT_THROW(parseConfigText(R"({"world": {"bogus": 1}})"),
               ConfigParseError);
  EXPECT_THROW(parseConfigText(R"({"extra": 1})"), ConfigParseError);
  EXPECT_THROW(parseConfigText(R"({"world": {"mu": "high"}})"),
               std::runtime_error);
  EXPECT_THROW(parseConfigFile("/nonexistent/cfg.json"), ConfigFileError);
}

TEST(Config, CommentKeyAndShippedDefaults) {
  EXPECT_EQ(parseConfigText(R"({"//": "notice"})"), RunConfig{});
  EXPECT_THROW(parseConfigText(R"({"world": {"//": 1}})"), ConfigParseError);
  EXPECT_EQ(parseConfigFile(DTACTIVE_SOURCE_DIR "/config/default.json"),
            RunConfig{});
}

TEST(Config, RoundTrip) {
  RunConfig cfg;
  cfg.seed = 42;
  cfg.world.c_normal = 1.25;
  cfg.gains.orientation.kd = 0.35;
  cfg.harness.trained = {"A1", "B1"};
  cfg.training.standardize = false;
  const std::string text = serialize(cfg);
  EXPECT_EQ(parseConfigText(text), cfg);
  EXPECT_EQ(serialize(parseConfigText(text)), text);
}

TEST(Config, Hash) {
  RunConfig a;
  RunConfig b;
  EXPECT_EQ(configHash(a), configHash(b));
  b.seed = 2;
  EXPECT_NE(configHash(a), configHash(b));
  EXPECT_EQ(configHash(a).size(), 16u);
}

}  // namespace
}  // namespace dtactive::config
