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

// Run configuration: a JSON object with the sections world, gains, training,
// features, harness and paths plus a top-level seed. Every field is optional;
// unknown keys are rejected, except a top-level "//" comment.

#ifndef DTACTIVE_CONFIG_HPP_
#define DTACTIVE_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dtactive/control.hpp"
#include "dtactive/harness.hpp"
#include "dtactive/learning.hpp"
#include "dtactive/world.hpp"

namespace dtactive::config {

class ConfigFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Carries the dotted key, e.g. "world.dt".
class ConfigRangeError : public std::runtime_error {
 public:
  ConfigRangeError(std::string key, const std::string& expected)
      : std::runtime_error(key + " " + expected), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct Paths {
  std::string data_dir = "out/data";
  std::string model_dir = "out/models";
  std::string report_dir = "out/reports";
};

struct RunConfig {
  std::uint64_t seed = 1;
  world::WorldConfig world;
  control::Gains gains;
  learning::TrainConfig training;
  learning::FeatureConfig features;
  harness::HarnessConfig harness;
  Paths paths;

  // Throws ConfigRangeError naming the first offending key.
  void validate() const;
  harness::Setup setup() const;

  bool operator==(const RunConfig& o) const;
};

RunConfig parseConfigText(const std::string& text);
RunConfig parseConfigFile(const std::string& path);

// Canonical JSON with every field spelled out.
std::string serialize(const RunConfig& cfg);
// FNV-1a of the canonical serialization, as 16 hex digits.
std::string configHash(const RunConfig& cfg);

}  // namespace dtactive::config

#endif  // DTACTIVE_CONFIG_HPP_
