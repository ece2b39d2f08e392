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

// Command-line pipeline: dexterity | collect | train | eval-offline |
// eval-online | run | demo. Exit codes: 0 success, 1 runtime failure,
// 2 usage error.
//
// On-disk layout under the configured directories:
//   data/manifest.txt               one "<csv> <sidecar>" line per trajectory
//   data/<object>_<k>.csv / .bin    trajectories
//   data/depth/*.pgm                depth maps (--dump-depth)
//   models/N.model, models/pi.model
//   reports/*.txt, reports/*.json, reports/online/*.csv

#ifndef DTACTIVE_CLI_HPP_
#define DTACTIVE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "dtactive/config.hpp"
#include "dtactive/harness.hpp"
#include "dtactive/learning.hpp"

namespace dtactive::cli {

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

// "config_hash=<hex> seed=<n>"; the hash ignores the output paths.
std::string provenance(const config::RunConfig& cfg);

// Pipeline stages, usable without argv parsing.
std::vector<harness::Trajectory> collectStage(const config::RunConfig& cfg,
                                              bool dump_depth,
                                              std::ostream& out);
std::vector<harness::Trajectory> loadDataset(const config::RunConfig& cfg);

struct Models {
  learning::ModelParams rectifier;
  learning::ModelParams policy;
};
Models trainStage(const config::RunConfig& cfg,
                  const std::vector<harness::Trajectory>& data,
                  std::ostream& out);
Models loadModels(const config::RunConfig& cfg);

std::vector<harness::OfflineEntry> evalOfflineStage(
    const config::RunConfig& cfg, const std::vector<harness::Trajectory>& data,
    const learning::ModelParams& rectifier, std::ostream& out);

std::vector<harness::OnlineResult> evalOnlineStage(
    const config::RunConfig& cfg, const std::vector<std::string>& objects,
    const std::vector<harness::Mode>& modes, const Models* models,
    std::ostream& out);

// Seeds of the two trainers derived from the run seed.
learning::TrainConfig trainConfigFor(const config::RunConfig& cfg,
                                     learning::Role role);

}  // namespace dtactive::cli

#endif  // DTACTIVE_CLI_HPP_
