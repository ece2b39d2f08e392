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

// Small planar geometry toolkit shared by the grasp analysis and the
// simulator. All lengths are millimetres.

#ifndef DTACTIVE_GEOMETRY_HPP_
#define DTACTIVE_GEOMETRY_HPP_

#include <cmath>
#include <span>
#include <vector>

namespace dtactive {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Rotates `p` counter-clockwise by `angle` radians about the origin.
inline Vec2 rotate(Vec2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

using Polygon = std::vector<Vec2>;

// Shoelace area; positive for counter-clockwise vertex order.
double signedArea(std::span<const Vec2> poly);

// Area centroid. Requires non-zero area.
Vec2 centroid(std::span<const Vec2> poly);

// Polar second moment of area, integral of |p - about|^2 dA, using the exact
// Green's-theorem vertex formulas. Sign follows the orientation of `poly`.
double polarMoment(std::span<const Vec2> poly, Vec2 about);

// Largest distance from `from` to the polygon boundary (attained at a
// vertex).
double maxVertexDistance(std::span<const Vec2> poly, Vec2 from);

double distanceToSegment(Vec2 p, Vec2 a, Vec2 b);

// True when no two non-adjacent edges intersect.
bool isSimple(std::span<const Vec2> poly);

// Inside or on the boundary (within `tol`).
bool containsPoint(std::span<const Vec2> poly, Vec2 p, double tol = 1e-9);

}  // namespace dtactive

#endif  // DTACTIVE_GEOMETRY_HPP_
