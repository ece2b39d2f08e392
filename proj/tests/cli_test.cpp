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

#include "dtactive/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace dtactive::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dtactive");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("dtactive_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"fly"}).code, 2);
  EXPECT_EQ(invoke({"--object", "Z9", "eval-online"}).code, 2);
  EXPECT_EQ(invoke({"--mode", "closed", "eval-online"}).code, 2);
  EXPECT_EQ(invoke({"--period", "0", "eval-online"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, Dexterity) {
  const Result r = invoke({"dexterity"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("min_radius_roller_r20_mm: 5.000"), std::string::npos)
      << r.out;
}

TEST(Cli, TrainWithoutDataset) {
  const fs::path dir = scratch("nodata");
  const Result r = invoke({"--out", dir.string(), "train"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("dataset not found: " +
                       (dir / "data" / "manifest.txt").string()),
            std::string::npos)
      << r.err;
}

TEST(Cli, MissingConfig) {
  const Result r = invoke({"--config", "/nonexistent.json", "collect"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("config file not found"), std::string::npos);
}

TEST(Cli, BadConfigValueNamesTheKey) {
  const fs::path dir = scratch("badcfg");
  std::ofstream(dir / "cfg.json") << R"({"world": {"dt": -1}})";
  const Result r = invoke({"--config", (dir / "cfg.json").string(), "collect"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("world.dt"), std::string::npos) << r.err;
}

TEST(Cli, EvalOnlineBothModes) {
  const fs::path dir = scratch("online");
  config::RunConfig cfg;
  cfg.paths.model_dir = (dir / "models").string();
  fs::create_directories(cfg.paths.model_dir);
  const int len = cfg.features.length();
  std::ofstream(dir / "models" / "N.model")
      << learning::writeCheckpoint(
             learning::ModelParams::zeros(learning::Role::kRectifier, {len, 1}));
  std::ofstream(dir / "models" / "pi.model")
      << learning::writeCheckpoint(
             learning::ModelParams::zeros(learning::Role::kPolicy, {len, 1}));
  std::ofstream(dir / "cfg.json") << R"({"harness": {"periods": 1}})";
  const Result r =
      invoke({"--config", (dir / "cfg.json").string(), "--out", dir.string(),
              "--object", "A1", "--mode", "open-loop", "--mode", "ours",
              "--period", "5", "eval-online"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("online A1 open-loop"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("online A1 ours"), std::string::npos) << r.out;
  const std::string report = slurp(dir / "reports" / "online.txt");
  EXPECT_NE(report.find("open-loop"), std::string::npos);
  EXPECT_NE(report.find("ours"), std::string::npos);
}

TEST(Cli, ProvenanceIgnoresPaths) {
  config::RunConfig a;
  config::RunConfig b;
  b.paths.report_dir = "/tmp/else";
  EXPECT_EQ(provenance(a), provenance(b));
  b.seed = 3;
  EXPECT_NE(provenance(a), provenance(b));
}

TEST(Cli, TrainSeedsDiffer) {
  config::RunConfig cfg;
  EXPECT_NE(trainConfigFor(cfg, learning::Role::kRectifier).seed,
            trainConfigFor(cfg, learning::Role::kPolicy).seed);
}

}  // namespace
}  // namespace dtactive::cli
