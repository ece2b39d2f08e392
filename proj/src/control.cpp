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

#include <algorithm>
#include <cmath>
#include <string>

#include "dtactive/errors.hpp"

namespace dtactive::control {

void Gains::validate() const {
  auto nonneg = [](const PdGains& p, const char* loop) {
    if (!(p.kp >= 0.0) || !(p.kd >= 0.0)) {
      throw DomainError(std::string(loop) + " gains must be >= 0");
    }
  };
  nonneg(grip, "grip");
  nonneg(orientation, "orientation");
  nonneg(position, "position");
  if (!(s_ref > 0.0)) throw DomainError("s_ref must be > 0");
  if (!(v_gap_max > 0.0)) throw DomainError("v_gap_max must be > 0");
  if (!(v_belt_max > 0.0)) throw DomainError("v_belt_max must be > 0");
  if (!(omega_max > 0.0)) throw DomainError("omega_max must be > 0");
  if (!(u_min > 0.0)) throw DomainError("u_min must be > 0");
  if (!(u_max >= u_min)) throw DomainError("u_max must be >= u_min");
  if (!std::isfinite(x_center)) throw DomainError("x_center must be finite");
}

namespace {

double pd(double error, const PdGains& k, PdMemory& mem, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  double out = k.kp * error;
  if (mem.primed) out += k.kd * (error - mem.previous_error) / dt;
  mem.previous_error = error;
  mem.primed = true;
  return out;
}

void requireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ControlError(std::string("non-finite ") + what);
  }
}

}  // namespace

double gripPd(double depth_sum, const Gains& g, ControlState& st, double dt) {
  const double e = g.s_ref - depth_sum;
  // Too little indentation (e > 0) must close the gripper.
  const double v = std::clamp(-pd(e, g.grip, st.grip, dt), -g.v_gap_max,
                              g.v_gap_max);
  requireFinite(v, "gap velocity");
  st.v_gap = v;
  return v;
}

double orientationPd(double theta_d, double theta_hat, const Gains& g,
                     ControlState& st, double dt) {
  const double w = std::clamp(pd(theta_d - theta_hat, g.orientation,
                                 st.orientation, dt),
                              -g.omega_max, g.omega_max);
  requireFinite(w, "desired angular velocity");
  st.omega_d = w;
  return w;
}

double positionPd(double centroid_x, const Gains& g, ControlState& st,
                  double dt) {
  const double half = 0.5 * g.v_belt_max;
  const double v = std::clamp(
      pd(g.x_center - centroid_x, g.position, st.position, dt), -half, half);
  requireFinite(v, "compensation velocity");
  st.v_comp = v;
  return v;
}

PolicyOutput invertRatio(double omega_d, double u_raw, const Gains& g) {
  if (!std::isfinite(u_raw)) throw ControlError("policy produced non-finite u");
  PolicyOutput out;
  out.u = std::clamp(u_raw, g.u_min, g.u_max);
  const double limit = g.omega_max / g.u_min;
  out.omega_c = std::clamp(omega_d / out.u, -limit, limit);
  return out;
}

PolicyOutput policyInvert(double omega_d, const world::DepthMap& left,
                          const world::DepthMap& right,
                          const learning::ModelParams& pi, const Gains& g,
                          const learning::FeatureConfig& features) {
  if (pi.role() != learning::Role::kPolicy) {
    throw ControlError("policy inversion needs a policy (pi) model");
  }
  double u = 0.0;
  try {
    u = learning::forward(pi, learning::featurize(left, right, omega_d,
                                                  features));
  } catch (const LearningError& e) {
    throw ControlError(std::string("policy model failed: ") + e.what());
  }
  return invertRatio(omega_d, u, g);
}

BeltVelocities beltCommands(double omega_c, double d_obj, double v_comp) {
  if (!(d_obj > 0.0)) throw DomainError("d_obj must be positive");
  const double roll = 0.5 * omega_c * d_obj;
  return {roll + v_comp, roll - v_comp};
}

BeltVelocities saturate(BeltVelocities v, const Gains& g) {
  const double peak = std::max(std::abs(v.v_left), std::abs(v.v_right));
  if (peak > g.v_belt_max) {
    const double s = g.v_belt_max / peak;
    v.v_left *= s;
    v.v_right *= s;
  }
  return v;
}

world::BeltCommand controlStep(const TickInput& in, const Gains& g,
                               const learning::ModelParams* pi,
                               ControlState& st, double dt,
                               const learning::FeatureConfig& features) {
  world::BeltCommand cmd;
  cmd.v_gap = gripPd(in.summary.depth_sum, g, st, dt);
  const double omega_d = orientationPd(in.theta_d, in.theta_hat, g, st, dt);
  PolicyOutput p;
  if (pi) {
    if (!in.left || !in.right) throw ControlError("policy needs depth maps");
    p = policyInvert(omega_d, *in.left, *in.right, *pi, g, features);
  } else {
    p = invertRatio(omega_d, 1.0, g);
  }
  st.u = p.u;
  st.omega_c = p.omega_c;
  const double v_comp = positionPd(in.summary.centroid_x, g, st, dt);
  const BeltVelocities v =
      saturate(beltCommands(p.omega_c, in.summary.d_obj, v_comp), g);
  cmd.v_left = v.v_left;
  cmd.v_right = v.v_right;
  requireFinite(cmd.v_left, "left belt command");
  requireFinite(cmd.v_right, "right belt command");
  return cmd;
}

world::BeltCommand holdOmegaStep(double omega_c,
                                 const estimator::TactileSummary& summary,
                                 const Gains& g, ControlState& st, double dt) {
  world::BeltCommand cmd;
  cmd.v_gap = gripPd(summary.depth_sum, g, st, dt);
  st.omega_d = omega_c;
  st.omega_c = omega_c;
  st.u = 1.0;
  const double v_comp = positionPd(summary.centroid_x, g, st, dt);
  const BeltVelocities v =
      saturate(beltCommands(omega_c, summary.d_obj, v_comp), g);
  cmd.v_left = v.v_left;
  cmd.v_right = v.v_right;
  return cmd;
}

}  // namespace dtactive::control
