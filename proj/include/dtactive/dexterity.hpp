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

// Grasp-capability analysis of a parallel gripper fitted with flat tactile
// fingertips: smallest pickable object, resistance to torsion about the
// grasp axis, and lifting force at the fingertip corners.

#ifndef DTACTIVE_DEXTERITY_HPP_
#define DTACTIVE_DEXTERITY_HPP_

#include "dtactive/geometry.hpp"

namespace dtactive::dexterity {

/// Cross-section of one fingertip near the table, fully closed.
///
/// The fingertip body ends in a rounded corner of radius `corner_radius`
/// whose lowest point sits `table_clearance` above the table. The flat
/// tactile plane lies on the closing plane and runs downward past the point
/// where the corner arc becomes tangent to it, by `plane_protrusion`.
/// A plane with zero protrusion makes the fingertip a plain rounded corner,
/// which pinches like a roller of the same radius.
struct CornerGeometry {
  double corner_radius = 12.0;
  double plane_protrusion = 6.88;
  double plane_half_length = 15.0;
  double table_clearance = 0.5;

  void validate() const;
};

/// Contact patch between object and tactile plane, counter-clockwise.
struct ContactRegion {
  Polygon boundary;
  Vec2 rotation_center;

  /// Region whose rotation center is the patch centroid.
  static ContactRegion aboutCentroid(Polygon boundary);
};

struct GraspLoad {
  double normal_force = 0.0;  // N
  double friction_coefficient = 0.0;
};

/// Smallest object radius a two-roller grasper of corner radius `R` can
/// pinch off a table: R / 4.
double minRadiusRoller(double corner_radius);

/// Smallest object radius that touches both closed fingertips while resting
/// on the table, found by bisection on the radius (tolerance 1e-6 mm).
/// Throws UngraspableError if no radius up to 100 mm makes contact.
double minRadiusFlatCorner(const CornerGeometry& geom);

/// Distance from `p` to the fingertip on the +x side of the closing plane.
double fingertipDistance(const CornerGeometry& geom, Vec2 p);

struct TorsionBreakdown {
  double area = 0.0;          // A0, mm^2
  double polar_moment = 0.0;  // Ip about the rotation center, mm^4
  double max_radius = 0.0;    // Lm, mm
  double torque = 0.0;        // N*mm, both fingertips
};

/// Maximum torque the two contact patches resist before the outermost point
/// slides, with friction growing linearly from the rotation center:
/// T = 2 mu F Ip / (Lm A0).
TorsionBreakdown antiTorsion(const ContactRegion& region, const GraspLoad& load);

inline double antiTorsionTorque(const ContactRegion& region,
                                const GraspLoad& load) {
  return antiTorsion(region, load).torque;
}

/// Net upward force on a round object of radius `r` pinched under corners of
/// radius `R`; negative when friction cannot overcome the wedge angle.
double liftingForce(double normal_force, double friction_coefficient,
                    double corner_radius, double object_radius);

}  // namespace dtactive::dexterity

#endif  // DTACTIVE_DEXTERITY_HPP_
