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

// Data collection, offline replay, online tracking and their metrics.
//
// Frame timing: frame k is logged after world step k. Its depth maps are
// rendered at that instant, its commanded angular velocity comes from the
// encoder motion over (k-1, k], and its ground-truth angular velocity is the
// mean over the same interval. The rectification label of frame k is
// omega_gt(k) / omega_c(k).

#ifndef DTACTIVE_HARNESS_HPP_
#define DTACTIVE_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtactive/control.hpp"
#include "dtactive/estimator.hpp"
#include "dtactive/learning.hpp"
#include "dtactive/world.hpp"

namespace dtactive::harness {

struct Frame {
  double t = 0.0;
  world::EncoderState encoders;
  double v_left = 0.0;  // encoder-derived, filtered
  double v_right = 0.0;
  double v_left_raw = 0.0;
  double v_right_raw = 0.0;
  estimator::TactileSummary summary;
  double omega_c = 0.0;
  double theta_gt = 0.0;
  double omega_gt = 0.0;
  double x_gt = 0.0;
  double theta_hat = 0.0;
  double k_hat = 1.0;
  double theta_d = 0.0;
  double omega_d = 0.0;
  double u = 1.0;
  double v_comp = 0.0;
  double v_gap = 0.0;
  double cmd_left = 0.0;
  double cmd_right = 0.0;
  std::vector<double> pooled;  // 2 * pool cells
};

struct Trajectory {
  std::string object_id;
  std::string profile;  // "const:<omega>" or "sine:<A>:<T>"
  std::uint64_t seed = 0;
  std::vector<Frame> frames;
  bool failed = false;
  std::string failure;
};

struct HarnessConfig {
  std::vector<double> speeds = {0.2, 0.35, 0.5, 0.65};  // rad/s
  std::vector<std::string> trained = {"A1", "A2", "A3", "B1", "B2",
                                      "B3", "C1", "C2", "C3"};
  std::vector<std::string> novel = {"N1", "N2", "N3"};
  double initial_depth = 0.5;    // mm per side at t = 0
  double max_time_factor = 8.0;  // rollout cap, multiples of 2*pi/omega
  double amplitude = 180.0;      // deg
  double period = 40.0;          // s
  int periods = 2;
  double velocity_filter = 1.0;  // EMA alpha on encoder velocities

  void validate() const;
};

// Everything a rollout needs besides the object.
struct Setup {
  world::WorldConfig world;
  control::Gains gains;
  HarnessConfig harness;
  learning::FeatureConfig features;
  std::uint64_t seed = 1;
};

// Noise seed of one rollout.
std::uint64_t rolloutSeed(std::uint64_t seed, const std::string& object_id,
                          std::uint64_t index);

// Observes every rendered frame (trajectory so far, frame index, maps).
using FrameSink = std::function<void(const Trajectory&, std::size_t,
                                     const world::DepthMap&,
                                     const world::DepthMap&)>;

// One constant-command 0 -> 360 deg rollout with the grip and position loops
// active. ObjectLost ends it early with `failed` set and frames retained.
Trajectory collectOne(const world::ObjectShape& object, double omega_c,
                      const Setup& setup, std::uint64_t index,
                      const FrameSink& sink = {});

// Four rollouts per trained object (one per speed), one per novel object at
// the middle speed, in fixed order.
std::vector<Trajectory> collect(const Setup& setup, const FrameSink& sink = {});

struct Split {
  std::vector<const Trajectory*> train;
  std::vector<const Trajectory*> test;
};

// Per trained object a seeded choice of one test trajectory out of its four;
// novel objects are test-only. Throws DatasetError on a malformed dataset.
Split split(const std::vector<Trajectory>& data, const HarnessConfig& h,
            std::uint64_t seed);

// Training samples of the given role; frames below the omega floor are
// dropped later by the trainer.
std::vector<learning::Sample> samples(
    const std::vector<const Trajectory*>& trajectories, learning::Role role,
    const learning::FeatureConfig& features);

// Orientation estimate replayed from a logged trajectory. `model` null means
// k = 1; `oracle` uses the logged omega_gt / omega_c.
enum class ReplayMode { kRaw, kModel, kOracle };
std::vector<double> replayTheta(const Trajectory& traj, ReplayMode mode,
                                const learning::ModelParams* model,
                                const Setup& setup);

double meanAbsErrorDeg(const Trajectory& traj,
                       const std::vector<double>& theta_hat);

struct OfflineEntry {
  std::string object_id;
  bool novel = false;
  double raw_deg = 0.0;
  double rectified_deg = 0.0;
  double oracle_deg = 0.0;
  bool failed = false;

  double reduction() const { return raw_deg - rectified_deg; }
};

// Throws LearningError unless the model carries the rectification role.
std::vector<OfflineEntry> evalOffline(
    const learning::ModelParams& model,
    const std::vector<const Trajectory*>& test, const Setup& setup);

// A * sin(2 pi t / T), degrees. T must be positive.
double desiredTrajectory(double t, double amplitude, double period);

enum class Mode { kOpenLoop, kOurs };
const char* modeName(Mode m);
Mode parseMode(const std::string& name);

struct OnlineResult {
  std::string object_id;
  Mode mode = Mode::kOpenLoop;
  double rmse_deg = 0.0;
  double rms_jerk = 0.0;      // deg/s^3, ground truth
  double rms_jerk_hat = 0.0;  // deg/s^3, estimate
  bool failed = false;
  std::string failure;
  Trajectory trajectory;
};

// Tracks the sinusoid for `periods` periods. Mode ours needs both models.
OnlineResult evalOnline(const world::ObjectShape& object, Mode mode,
                        const learning::ModelParams* rectifier,
                        const learning::ModelParams* policy,
                        const Setup& setup);

// Throws DomainError on length mismatch or empty input.
double rmse(const std::vector<double>& desired,
            const std::vector<double>& actual);
// RMS of the third finite difference over dt^3. Needs >= 4 samples.
double rmsJerk(const std::vector<double>& series, double dt);

// ---------------------------------------------------------------------------
// Persistence

// CSV with one frame per row at 9 significant digits. The sidecar holds, per
// frame, the pooled features followed by omega_c and omega_gt as
// little-endian doubles so that replay is exact.
struct TrajectoryFiles {
  std::string csv;
  std::string features;
};
TrajectoryFiles encodeTrajectory(const Trajectory& traj,
                                 const std::string& features_name,
                                 const std::string& provenance);
Trajectory decodeTrajectory(const std::string& csv,
                            const std::string& features,
                            const learning::FeatureConfig& fc);

struct Report {
  std::vector<OfflineEntry> offline;
  std::vector<OnlineResult> online;
};

std::string reportText(const Report& r, const std::string& provenance);
std::string reportJson(const Report& r, const std::string& provenance);

}  // namespace dtactive::harness

#endif  // DTACTIVE_HARNESS_HPP_
