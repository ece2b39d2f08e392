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

// Three PD loops and policy inversion, one tick at the control rate:
//
//   grip:        depth sum S      -> gap velocity
//   orientation: theta_d - theta  -> desired angular velocity omega_d
//   policy:      omega_d / u      -> angular velocity command omega_c
//   position:    centroid x       -> translation compensation v_comp
//   belts:       v_L,R = omega_c * d_obj / 2 +- v_comp
//
// Derivative terms use a one-step backward difference of the error and are
// skipped on a loop's first tick, so a fresh controller never kicks.

#ifndef DTACTIVE_CONTROL_HPP_
#define DTACTIVE_CONTROL_HPP_

#include "dtactive/estimator.hpp"
#include "dtactive/learning.hpp"
#include "dtactive/world.hpp"

namespace dtactive::control {

struct PdGains {
  double kp = 0.0;
  double kd = 0.0;
};

struct Gains {
  PdGains grip{4e-3, 5e-4};
  PdGains orientation{2.0, 0.2};
  PdGains position{1.0, 0.1};
  double s_ref = 1500.0;     // mm*px
  double x_center = 0.0;     // mm
  double v_gap_max = 10.0;   // mm/s
  double v_belt_max = 20.0;  // mm/s
  double omega_max = 0.65;   // rad/s, fastest collection speed
  double u_min = 0.1;
  double u_max = 1.5;

  // Throws DomainError naming the offending field.
  void validate() const;
};

struct PdMemory {
  double previous_error = 0.0;
  bool primed = false;
};

struct ControlState {
  PdMemory grip;
  PdMemory orientation;
  PdMemory position;
  double omega_d = 0.0;
  double omega_c = 0.0;
  double u = 1.0;
  double v_comp = 0.0;
  double v_gap = 0.0;

  void reset() { *this = ControlState{}; }
};

// Positive output opens the gripper; a depth sum below S_ref closes it.
double gripPd(double depth_sum, const Gains& g, ControlState& st, double dt);
double orientationPd(double theta_d, double theta_hat, const Gains& g,
                     ControlState& st, double dt);
double positionPd(double centroid_x, const Gains& g, ControlState& st,
                  double dt);

struct PolicyOutput {
  double omega_c = 0.0;
  double u = 1.0;
};

// Clamps u to [u_min, u_max] and divides; throws ControlError for a
// non-finite u.
PolicyOutput invertRatio(double omega_d, double u_raw, const Gains& g);
// u = pi(D_L, D_R, omega_d). The model must carry the policy role.
PolicyOutput policyInvert(double omega_d, const world::DepthMap& left,
                          const world::DepthMap& right,
                          const learning::ModelParams& pi, const Gains& g,
                          const learning::FeatureConfig& features = {});

struct BeltVelocities {
  double v_left = 0.0;
  double v_right = 0.0;
};

// Exact inverse of estimator::commandOmega, no saturation.
BeltVelocities beltCommands(double omega_c, double d_obj, double v_comp);
// Scales both belts by a common factor so neither exceeds v_belt_max; this
// keeps the rotation/translation mix of the command.
BeltVelocities saturate(BeltVelocities v, const Gains& g);

struct TickInput {
  double theta_d = 0.0;
  estimator::TactileSummary summary;  // already held over invalid frames
  const world::DepthMap* left = nullptr;
  const world::DepthMap* right = nullptr;
  double theta_hat = 0.0;
};

// Full tick in loop order grip -> orientation -> policy -> position -> belts.
// Without a policy model u = 1.
world::BeltCommand controlStep(const TickInput& in, const Gains& g,
                               const learning::ModelParams* pi,
                               ControlState& st, double dt,
                               const learning::FeatureConfig& features = {});

// Constant-command tick used for data collection: grip and position loops
// run, the rotation command is fixed.
world::BeltCommand holdOmegaStep(double omega_c,
                                 const estimator::TactileSummary& summary,
                                 const Gains& g, ControlState& st, double dt);

}  // namespace dtactive::control

#endif  // DTACTIVE_CONTROL_HPP_
