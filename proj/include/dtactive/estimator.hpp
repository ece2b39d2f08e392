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

// Tactile statistics and dead-reckoning orientation estimation.
//
// The orientation estimate integrates the commanded angular velocity derived
// from the belt encoders, rescaled by a rolling ratio k that is either 1 (raw
// dead reckoning) or predicted by a rectification model.

#ifndef DTACTIVE_ESTIMATOR_HPP_
#define DTACTIVE_ESTIMATOR_HPP_

#include <optional>

#include "dtactive/learning.hpp"
#include "dtactive/world.hpp"

namespace dtactive::estimator {

struct TactileSummary {
  double depth_sum = 0.0;   // mm*px, both maps
  double centroid_x = 0.0;  // mm, mean of the two map centroids
  double d_obj = 0.0;       // mm
  double max_left = 0.0;
  double max_right = 0.0;
  bool valid = false;       // both maps carry contact
};

// Throws DomainError when the maps differ in size.
TactileSummary summarize(const world::DepthMap& left,
                         const world::DepthMap& right, double gap);

// (v_L + v_R) / d_obj. Throws DomainError for d_obj <= 0.
double commandOmega(double v_left, double v_right, double d_obj);

// Gap reconstructed from the gripper encoder: g = g0 + gap_per_rad * theta_G.
struct GapCalibration {
  double g0 = 0.0;           // mm at theta_G = 0
  double gap_per_rad = 1.0;  // mm/rad
  double gap(double theta_gripper) const {
    return g0 + gap_per_rad * theta_gripper;
  }
};

// Belt surface velocities from encoder backward differences, with an
// optional exponential filter (alpha = 1 disables it).
class EncoderVelocity {
 public:
  EncoderVelocity(double rho, double dt, double alpha = 1.0);

  struct Reading {
    double v_left = 0.0;   // filtered, mm/s
    double v_right = 0.0;
    double raw_left = 0.0;
    double raw_right = 0.0;
  };

  // The first call only latches the encoder values and returns zeros.
  Reading update(const world::EncoderState& enc);

 private:
  double rho_;
  double dt_;
  double alpha_;
  std::optional<world::EncoderState> last_;
  Reading filtered_;
};

// Holds the last valid centroid and d_obj across missing-contact frames;
// more than `max_hold` consecutive invalid frames raises ObjectLost.
class TactileTracker {
 public:
  explicit TactileTracker(int max_hold = 5) : max_hold_(max_hold) {}

  TactileSummary update(const TactileSummary& s);
  int invalidStreak() const { return streak_; }

 private:
  int max_hold_;
  int streak_ = 0;
  std::optional<TactileSummary> last_valid_;
};

struct OrientationEstimate {
  double theta = 0.0;  // rad, unwrapped
  double k = 1.0;      // last rolling ratio used
};

// k = N(D_L, D_R, omega_c) when a model is given, else 1; then
// theta += k * omega_c * dt. Throws EstimatorError on a non-finite
// prediction or a model with the wrong role, DomainError for dt <= 0.
OrientationEstimate update(const OrientationEstimate& est,
                           const world::DepthMap& left,
                           const world::DepthMap& right, double omega_c,
                           double dt, const learning::ModelParams* model,
                           const learning::FeatureConfig& features = {});

// Same integration with an externally supplied ratio (oracle replay).
OrientationEstimate update(const OrientationEstimate& est, double k,
                           double omega_c, double dt);

// Prediction from pre-pooled features; used by replay.
double predictRatio(const learning::ModelParams& model,
                    std::span<const double> pooled, double omega_c,
                    const learning::FeatureConfig& features = {});

}  // namespace dtactive::estimator

#endif  // DTACTIVE_ESTIMATOR_HPP_
