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

// Planar cross-section of an object squeezed between two parallel belt
// surfaces.
//
// Frame: x runs along the belts, y across the gap. The left belt surface is
// the line y = -gap/2, the right one y = +gap/2; both are centered on x = 0
// and span the sensor length. A belt command v is expressed in that belt's
// own frame: the left belt surface moves at +v_L in world x, the right one
// at -v_R, so equal positive commands roll the object counter-clockwise.
//
// Contact is penalty based. Along each belt the penetration profile is
// sampled at pixel pitch; the normal pressure is k_n * depth. Friction
// follows a tanh-regularized Coulomb law acting at the deepest penetration
// level of each patch, so a rolling circle obeys omega = (v_L + v_R) / d_obj
// up to slip. The object is overdamped: every substep its planar velocity
// balances belt friction against rotational damping, the elastic torque of
// the normal pressure, and viscous resistance of the belt surface to being
// re-indented as the contact profile changes under rotation.

#ifndef DTACTIVE_WORLD_HPP_
#define DTACTIVE_WORLD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dtactive/geometry.hpp"

namespace dtactive::world {

class ObjectShape {
 public:
  enum class Kind { kCircle, kPolygon };

  static ObjectShape circle(std::string id, double radius);
  // Re-centers the vertices on their area centroid and enforces CCW order.
  static ObjectShape polygon(std::string id, Polygon vertices);

  const std::string& id() const { return id_; }
  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  // Body-frame vertices (empty for circles).
  const Polygon& vertices() const { return vertices_; }

  double maxRadius() const;
  double minRadius() const;

  // Same shape reflected across the body y axis.
  ObjectShape mirrored() const;

  // Throws DomainError unless simple, star-shaped about the centroid, and
  // within the 3..30 mm radius band.
  void validate() const;

 private:
  std::string id_;
  Kind kind_ = Kind::kCircle;
  double radius_ = 0.0;
  Polygon vertices_;
};

struct Pose2 {
  double x = 0.0;      // mm, along the belts
  double y = 0.0;      // mm, across the gap
  double theta = 0.0;  // rad, unwrapped
};

struct EncoderState {
  double gripper = 0.0;  // theta_G, rad
  double left = 0.0;     // theta_L, rad
  double right = 0.0;    // theta_R, rad
};

struct WorldConfig {
  double k_n = 5.0;           // N/mm^2, normal stiffness per unit length
  double mu = 0.8;
  double c_rot = 0.5;         // N*mm*s
  double c_normal = 2.0;      // N*s/mm^2, belt re-indentation damping
  double v_stick = 0.1;       // mm/s
  double dt = 1.0 / 20.0;     // s
  int substeps = 10;
  double d_max = 1.5;         // mm
  double noise_sigma = 0.01;  // mm
  std::uint64_t seed = 1;
  double rho = 5.0;           // mm of belt travel per motor rad
  double gap_per_rad = 1.0;   // mm of gap per gripper motor rad
  int map_width = 115;        // pixels along the belt
  int map_height = 86;        // pixels across the belt width
  double pitch = 0.4;         // mm per pixel
  double object_thickness = 20.0;  // mm of extrusion seen by the sensor
  double gap_min = 2.0;       // mm
  double gap_max = 80.0;      // mm

  double sensorLength() const { return map_width * pitch; }
  void validate() const;
};

struct BeltCommand {
  double v_left = 0.0;   // mm/s, left belt frame
  double v_right = 0.0;  // mm/s, right belt frame
  double v_gap = 0.0;    // mm/s, positive opens
};

// Velocity solve of the most recent substep.
struct SolveInfo {
  double v_x = 0.0;
  double v_y = 0.0;
  double omega = 0.0;
  bool contact_left = false;
  bool contact_right = false;
  Vec2 p1;  // deepest left contact point, world
  Vec2 p2;  // deepest right contact point, world
  double d_obj = 0.0;
  double normal_left = 0.0;   // N
  double normal_right = 0.0;  // N
  double elastic_torque = 0.0;
  double damping = 0.0;  // total rotational damping, N*mm*s

  // Object-surface x velocity at the deepest contact points.
  double surfaceVx(Vec2 p, const Pose2& pose) const {
    return v_x - omega * (p.y - pose.y);
  }
};

struct WorldState {
  ObjectShape object;
  Pose2 pose;
  double omega = 0.0;  // rad/s, last substep
  double mean_omega = 0.0;  // rad/s, average over the last step
  double gap = 0.0;    // mm
  double belt_left = 0.0;   // s_L, mm
  double belt_right = 0.0;  // s_R, mm
  EncoderState encoders;
  double t = 0.0;
  std::int64_t ticks = 0;
  SolveInfo last_solve;
};

// Places `shape` at (x0, 0) with orientation zero and sets the gap so that
// each belt is indented by `initial_depth`.
WorldState makeInitialState(const ObjectShape& shape, double initial_depth,
                            double x0 = 0.0);

// A1..A3, B1..B3, C1..C3, N1..N3.
std::vector<ObjectShape> buildObjectLibrary();
const ObjectShape& libraryObject(const std::string& id);

struct ContactSummary {
  bool left = false;   // any penetration into the left belt
  bool right = false;
  Vec2 p1;
  Vec2 p2;
  double tilt = 0.0;  // angle between p1->p2 and the y axis
  double d_obj = 0.0;
  double depth_left = 0.0;
  double depth_right = 0.0;
  struct Sample {
    double x;
    double depth;
  };
  std::vector<Sample> patch_left;
  std::vector<Sample> patch_right;

  bool any() const { return left || right; }
  bool both() const { return left && right; }
};

// Penetration profile at pixel pitch; NoContact is `!any()`.
ContactSummary contact(const WorldState& state, const WorldConfig& cfg);

// Advances one control period. Throws ObjectLost when the object leaves the
// gap or the sensor planes, NumericalError on a non-finite solve.
WorldState step(const WorldState& state, const BeltCommand& cmd,
                const WorldConfig& cfg);

enum class Side { kLeft, kRight };

struct DepthMap {
  int width = 0;
  int height = 0;
  double pitch = 0.0;
  double d_max = 0.0;
  std::vector<double> values;  // row-major, height x width

  double at(int row, int col) const { return values[row * width + col]; }
  // World x of a column center.
  double columnX(int col) const { return (col - 0.5 * (width - 1)) * pitch; }
  double sum() const;
  double max() const;
};

// Synthetic tactile depth image in the sensor frame. Noise is only added on
// the contact support and is reproducible from (seed, tick, side).
DepthMap renderDepth(const WorldState& state, Side side,
                     const WorldConfig& cfg);

struct GroundTruth {
  double theta = 0.0;
  double omega = 0.0;
  double x = 0.0;
};

GroundTruth groundTruth(const WorldState& state);

// Binary 16-bit PGM (P5), depth in micrometres.
std::string encodePgm(const DepthMap& map, const std::string& comment);

}  // namespace dtactive::world

#endif  // DTACTIVE_WORLD_HPP_
