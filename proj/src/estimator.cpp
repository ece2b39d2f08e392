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

#include "dtactive/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "dtactive/errors.hpp"

namespace dtactive::estimator {

namespace {

struct MapStats {
  double sum = 0.0;
  double weighted_x = 0.0;
  double max = 0.0;
};

MapStats stats(const world::DepthMap& m) {
  MapStats s;
  for (int i = 0; i < m.height; ++i) {
    for (int j = 0; j < m.width; ++j) {
      const double d = m.at(i, j);
      if (d <= 0.0) continue;
      s.sum += d;
      s.weighted_x += d * m.columnX(j);
      s.max = std::max(s.max, d);
    }
  }
  return s;
}

}  // namespace

TactileSummary summarize(const world::DepthMap& left,
                         const world::DepthMap& right, double gap) {
  if (left.width != right.width || left.height != right.height) {
    throw DomainError("depth maps differ in size");
  }
  const MapStats l = stats(left);
  const MapStats r = stats(right);
  TactileSummary out;
  out.depth_sum = l.sum + r.sum;
  out.max_left = l.max;
  out.max_right = r.max;
  out.valid = l.sum > 0.0 && r.sum > 0.0;
  if (out.valid) {
    out.centroid_x = 0.5 * (l.weighted_x / l.sum + r.weighted_x / r.sum);
    out.d_obj = gap + l.max + r.max;
  }
  return out;
}

double commandOmega(double v_left, double v_right, double d_obj) {
  if (!(d_obj > 0.0)) throw DomainError("d_obj must be positive");
  return (v_left + v_right) / d_obj;
}

EncoderVelocity::EncoderVelocity(double rho, double dt, double alpha)
    : rho_(rho), dt_(dt), alpha_(alpha) {
  if (!(rho > 0.0) || !(dt > 0.0)) {
    throw DomainError("encoder velocity needs rho > 0 and dt > 0");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("filter alpha must be in (0, 1]");
  }
}

EncoderVelocity::Reading EncoderVelocity::update(
    const world::EncoderState& enc) {
  if (!last_) {
    last_ = enc;
    return filtered_;
  }
  Reading r;
  r.raw_left = rho_ * (enc.left - last_->left) / dt_;
  r.raw_right = rho_ * (enc.right - last_->right) / dt_;
  r.v_left = alpha_ * r.raw_left + (1.0 - alpha_) * filtered_.v_left;
  r.v_right = alpha_ * r.raw_right + (1.0 - alpha_) * filtered_.v_right;
  last_ = enc;
  filtered_ = r;
  return r;
}

TactileSummary TactileTracker::update(const TactileSummary& s) {
  if (s.valid) {
    streak_ = 0;
    last_valid_ = s;
    return s;
  }
  ++streak_;
  if (!last_valid_ || streak_ > max_hold_) {
    throw ObjectLost("tactile contact missing for " + std::to_string(streak_) +
                     " frames");
  }
  TactileSummary held = s;
  held.centroid_x = last_valid_->centroid_x;
  held.d_obj = last_valid_->d_obj;
  return held;
}

OrientationEstimate update(const OrientationEstimate& est, double k,
                           double omega_c, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!std::isfinite(k)) throw EstimatorError("non-finite rolling ratio");
  OrientationEstimate out;
  out.k = k;
  out.theta = est.theta + k * omega_c * dt;
  return out;
}

double predictRatio(const learning::ModelParams& model,
                    std::span<const double> pooled, double omega_c,
                    const learning::FeatureConfig& features) {
  if (model.role() != learning::Role::kRectifier) {
    throw EstimatorError("estimator needs a rectification (N) model");
  }
  double k = 0.0;
  try {
    k = learning::forward(model, learning::assemble(pooled, omega_c, features));
  } catch (const LearningError& e) {
    throw EstimatorError(std::string("rectification model failed: ") +
                         e.what());
  }
  return k;
}

OrientationEstimate update(const OrientationEstimate& est,
                           const world::DepthMap& left,
                           const world::DepthMap& right, double omega_c,
                           double dt, const learning::ModelParams* model,
                           const learning::FeatureConfig& features) {
  if (!model) return update(est, 1.0, omega_c, dt);
  const auto pooled = learning::poolMaps(left, right, features);
  return update(est, predictRatio(*model, pooled, omega_c, features), omega_c,
                dt);
}

}  // namespace dtactive::estimator
