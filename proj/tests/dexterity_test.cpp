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
#include <numbers>

#include <gtest/gtest.h>

#include "dtactive/errors.hpp"

namespace dtactive::dexterity {
namespace {

Polygon regular(int n, double radius) {
  Polygon p;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    p.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return p;
}

TEST(MinRadiusRoller, QuarterOfCornerRadius) {
  EXPECT_EQ(minRadiusRoller(20.0), 5.0);
  EXPECT_EQ(minRadiusRoller(4.0), 1.0);
  EXPECT_THROW(minRadiusRoller(0.0), DomainError);
  EXPECT_THROW(minRadiusRoller(-3.0), DomainError);
}

TEST(MinRadiusFlatCorner, DefaultFingertip) {
  const double r = minRadiusFlatCorner(CornerGeometry{});
  EXPECT_NEAR(r, 2.81, 0.05);
  // bisection is deterministic
  EXPECT_EQ(r, minRadiusFlatCorner(CornerGeometry{}));
}

TEST(MinRadiusFlatCorner, NoPlaneIsARoller) {
  for (double R : {4.0, 12.0, 20.0}) {
    CornerGeometry g;
    g.corner_radius = R;
    g.plane_protrusion = 0.0;
    g.plane_half_length = R + 5.0;
    g.table_clearance = 0.0;
    EXPECT_NEAR(minRadiusFlatCorner(g), minRadiusRoller(R), 1e-6) << R;
  }
}

TEST(MinRadiusFlatCorner, RejectsBadGeometry) {
  CornerGeometry g;
  g.corner_radius = -1.0;
  EXPECT_THROW(minRadiusFlatCorner(g), DomainError);
}

TEST(AntiTorsion, DiskMatchesMuFa) {
  const auto region = ContactRegion::aboutCentroid(regular(720, 10.0));
  const GraspLoad load{10.0, 1.0};
  EXPECT_NEAR(antiTorsionTorque(region, load), 100.0, 0.5);
}

TEST(AntiTorsion, Square) {
  const Polygon sq = {{-10, -10}, {10, -10}, {10, 10}, {-10, 10}};
  const auto b = antiTorsion(ContactRegion::aboutCentroid(sq), {10.0, 0.5});
  EXPECT_NEAR(b.area, 400.0, 1e-9);
  EXPECT_NEAR(b.polar_moment, 160000.0 / 6.0, 1e-6);
  EXPECT_NEAR(b.max_radius, 10.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(b.torque, 47.14045207910317, 1e-6);
}

TEST(AntiTorsion, FrictionlessIsZero) {
  const auto region = ContactRegion::aboutCentroid(regular(12, 5.0));
  EXPECT_EQ(antiTorsionTorque(region, {10.0, 0.0}), 0.0);
}

TEST(AntiTorsion, ClockwiseInputGivesSameTorque) {
  Polygon p = regular(40, 6.0);
  const double ccw = antiTorsionTorque(ContactRegion::aboutCentroid(p),
                                       {5.0, 0.7});
  std::reverse(p.begin(), p.end());
  EXPECT_NEAR(antiTorsionTorque(ContactRegion::aboutCentroid(p), {5.0, 0.7}),
              ccw, 1e-9);
}

TEST(AntiTorsion, DegenerateRegion) {
  EXPECT_THROW(antiTorsion(ContactRegion::aboutCentroid({{0, 0}, {1, 0}}),
                           {1.0, 1.0}),
               DomainError);
  EXPECT_THROW(antiTorsion(ContactRegion::aboutCentroid(
                               {{0, 0}, {1, 0}, {2, 0}}),
                           {1.0, 1.0}),
               DomainError);
}

TEST(LiftingForce, EqualRadii) {
  EXPECT_EQ(liftingForce(10.0, 0.8, 5.0, 5.0), 2.0 * 0.8 * 10.0);
}

TEST(LiftingForce, FortyFiveDegrees) {
  EXPECT_NEAR(liftingForce(10.0, 1.0, 10.0, 5.0), 0.0, 1e-9);
  EXPECT_NEAR(liftingForce(10.0, 0.8, 10.0, 5.0), -2.8284271247461894, 1e-6);
}

TEST(LiftingForce, Domain) {
  EXPECT_THROW(liftingForce(10.0, 0.8, 4.0, 5.0), DomainError);
  EXPECT_THROW(liftingForce(-1.0, 0.8, 10.0, 5.0), DomainError);
}

}  // namespace
}  // namespace dtactive::dexterity
