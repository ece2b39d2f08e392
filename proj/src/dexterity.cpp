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

#include "dtactive/dexterity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtactive/errors.hpp"

namespace dtactive::dexterity {

namespace {

constexpr double kBisectionTol = 1e-6;
constexpr int kBisectionMaxIter = 200;
constexpr double kSearchLimit = 100.0;

}  // namespace

void CornerGeometry::validate() const {
  if (!(corner_radius > 0.0) || !(plane_protrusion > 0.0) ||
      !(plane_half_length > 0.0) || !(table_clearance > 0.0)) {
    throw DomainError("corner geometry fields must be positive");
  }
  if (!(plane_half_length > corner_radius)) {
    throw DomainError("plane_half_length must exceed corner_radius");
  }
}

ContactRegion ContactRegion::aboutCentroid(Polygon boundary) {
  const Vec2 c = centroid(boundary);
  return {std::move(boundary), c};
}

double minRadiusRoller(double corner_radius) {
  if (!(corner_radius > 0.0)) {
    throw DomainError("corner radius must be positive");
  }
  return corner_radius / 4.0;
}

double fingertipDistance(const CornerGeometry& g, Vec2 p) {
  // Corner arc: the fingertip body is tangent to the closing plane x = 0 at
  // height clearance + R.
  const Vec2 center{g.corner_radius, g.table_clearance + g.corner_radius};
  const double to_arc = std::max(0.0, (p - center).norm() - g.corner_radius);
  const double plane_low = center.y - g.plane_protrusion;
  const Vec2 a{0.0, plane_low};
  const Vec2 b{0.0, plane_low + 2.0 * g.plane_half_length};
  return std::min(to_arc, distanceToSegment(p, a, b));
}

double minRadiusFlatCorner(const CornerGeometry& geom) {
  // A degenerate zero protrusion is allowed here: it is the roller limit.
  if (!(geom.corner_radius > 0.0) || geom.plane_protrusion < 0.0 ||
      !(geom.plane_half_length > 0.0) || geom.table_clearance < 0.0) {
    throw DomainError("invalid corner geometry");
  }
  // Object resting on the table, centered under the closing plane; the
  // fingertips are mirror images so one side decides contact.
  auto touches = [&](double r) {
    return fingertipDistance(geom, Vec2{0.0, r}) <= r;
  };
  if (!touches(kSearchLimit)) {
    throw UngraspableError("no object radius up to " +
                           std::to_string(kSearchLimit) +
                           " mm touches both fingertips");
  }
  double lo = 0.0;
  double hi = kSearchLimit;
  if (touches(lo)) return 0.0;
  for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (touches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TorsionBreakdown antiTorsion(const ContactRegion& region,
                             const GraspLoad& load) {
  if (load.normal_force < 0.0 || load.friction_coefficient < 0.0) {
    throw DomainError("grasp load must be non-negative");
  }
  const auto& poly = region.boundary;
  if (poly.size() < 3) throw DomainError("contact region needs >= 3 vertices");
  const double signed_area = signedArea(poly);
  if (signed_area == 0.0) throw DomainError("contact region has zero area");
  TorsionBreakdown out;
  out.area = std::abs(signed_area);
  out.polar_moment = std::abs(polarMoment(poly, region.rotation_center));
  out.max_radius = maxVertexDistance(poly, region.rotation_center);
  if (!(out.max_radius > 0.0)) {
    throw DomainError("contact region collapses onto its rotation center");
  }
  out.torque = 2.0 * load.friction_coefficient * load.normal_force *
               out.polar_moment / (out.max_radius * out.area);
  return out;
}

double liftingForce(double normal_force, double friction_coefficient,
                    double corner_radius, double object_radius) {
  if (!(object_radius > 0.0) || corner_radius < object_radius) {
    throw DomainError("lifting force needs R >= r > 0");
  }
  if (normal_force < 0.0 || friction_coefficient < 0.0) {
    throw DomainError("normal force and friction must be non-negative");
  }
  const double alpha = std::atan(corner_radius / object_radius - 1.0);
  const double friction = friction_coefficient * normal_force;
  return 2.0 * (friction * std::cos(alpha) - normal_force * std::sin(alpha));
}

}  // namespace dtactive::dexterity
