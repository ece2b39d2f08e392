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

#include "dtactive/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "dtactive/errors.hpp"
#include "dtactive/rng.hpp"

namespace dtactive::world {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Shapes

ObjectShape ObjectShape::circle(std::string id, double radius) {
  ObjectShape s;
  s.id_ = std::move(id);
  s.kind_ = Kind::kCircle;
  s.radius_ = radius;
  return s;
}

ObjectShape ObjectShape::polygon(std::string id, Polygon vertices) {
  if (vertices.size() < 3) throw DomainError("polygon needs >= 3 vertices");
  if (signedArea(vertices) < 0.0) {
    std::reverse(vertices.begin(), vertices.end());
  }
  const Vec2 c = centroid(vertices);
  for (Vec2& v : vertices) v = v - c;
  ObjectShape s;
  s.id_ = std::move(id);
  s.kind_ = Kind::kPolygon;
  s.vertices_ = std::move(vertices);
  s.radius_ = s.maxRadius();
  return s;
}

double ObjectShape::maxRadius() const {
  if (kind_ == Kind::kCircle) return radius_;
  return maxVertexDistance(vertices_, Vec2{});
}

double ObjectShape::minRadius() const {
  if (kind_ == Kind::kCircle) return radius_;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, distanceToSegment(Vec2{}, vertices_[i],
                                            vertices_[(i + 1) % n]));
  }
  return best;
}

ObjectShape ObjectShape::mirrored() const {
  if (kind_ == Kind::kCircle) return *this;
  Polygon flipped;
  flipped.reserve(vertices_.size());
  for (auto it = vertices_.rbegin(); it != vertices_.rend(); ++it) {
    flipped.push_back({-it->x, it->y});
  }
  ObjectShape s = *this;
  s.vertices_ = std::move(flipped);
  return s;
}

void ObjectShape::validate() const {
  if (kind_ == Kind::kPolygon) {
    if (!isSimple(vertices_)) throw DomainError(id_ + ": boundary not simple");
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(cross(vertices_[i], vertices_[(i + 1) % n]) > 0.0)) {
        throw DomainError(id_ + ": not star-shaped about its centroid");
      }
    }
  }
  if (!(minRadius() >= 3.0) || !(maxRadius() <= 30.0)) {
    throw DomainError(id_ + ": radius outside [3, 30] mm");
  }
}

namespace {

Polygon regularPolygon(int sides, double circumradius, double phase) {
  Polygon p;
  for (int k = 0; k < sides; ++k) {
    const double a = phase + 2.0 * pi * k / sides;
    p.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
  }
  return p;
}

Polygon sampled(int n, auto&& radial_point) {
  Polygon p;
  p.reserve(n);
  for (int k = 0; k < n; ++k) p.push_back(radial_point(2.0 * pi * k / n));
  return p;
}

// Minkowski sum of a convex CCW polygon with a disk.
Polygon rounded(const Polygon& core, double radius, int arc_points) {
  Polygon out;
  const std::size_t n = core.size();
  auto outward = [&](std::size_t i) {
    const Vec2 e = core[(i + 1) % n] - core[i];
    return std::atan2(-e.x, e.y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    double a0 = outward((i + n - 1) % n);
    double a1 = outward(i);
    while (a1 < a0) a1 += 2.0 * pi;
    for (int k = 0; k <= arc_points; ++k) {
      const double a = a0 + (a1 - a0) * k / arc_points;
      out.push_back(core[i] + radius * Vec2{std::cos(a), std::sin(a)});
    }
  }
  return out;
}

std::vector<ObjectShape> makeLibrary() {
  std::vector<ObjectShape> lib;
  lib.push_back(ObjectShape::circle("A1", 10.0));
  lib.push_back(ObjectShape::circle("A2", 12.5));
  lib.push_back(ObjectShape::circle("A3", 15.0));
  // Regular polygons with a flat face on each belt at zero orientation.
  lib.push_back(ObjectShape::polygon("B1", regularPolygon(4, 12.5, pi / 4)));
  lib.push_back(ObjectShape::polygon("B2", regularPolygon(6, 12.5, 0.0)));
  lib.push_back(ObjectShape::polygon("B3", regularPolygon(8, 12.5, pi / 8)));
  lib.push_back(ObjectShape::polygon("C1", sampled(128, [](double a) {
    return Vec2{15.0 * std::cos(a), 10.0 * std::sin(a)};
  })));
  lib.push_back(ObjectShape::polygon(
      "C2", rounded(regularPolygon(3, 9.0, pi / 2), 3.0, 12)));
  {
    Polygon stadium;
    for (int k = 0; k <= 32; ++k) {
      const double a = -pi / 2 + pi * k / 32;
      stadium.push_back({7.0 + 8.0 * std::cos(a), 8.0 * std::sin(a)});
    }
    for (int k = 0; k <= 32; ++k) {
      const double a = pi / 2 + pi * k / 32;
      stadium.push_back({-7.0 + 8.0 * std::cos(a), 8.0 * std::sin(a)});
    }
    lib.push_back(ObjectShape::polygon("C3", std::move(stadium)));
  }
  lib.push_back(ObjectShape::polygon("N1", regularPolygon(5, 12.5, pi / 2)));
  lib.push_back(ObjectShape::polygon("N2", sampled(128, [](double a) {
    auto f = [](double v) { return std::copysign(std::sqrt(std::abs(v)), v); };
    return Vec2{12.0 * f(std::cos(a)), 12.0 * f(std::sin(a))};
  })));
  lib.push_back(ObjectShape::polygon("N3", sampled(128, [](double a) {
    const double r = 11.0 + 2.0 * std::cos(2 * a + 0.3) +
                     1.2 * std::sin(3 * a) + 0.8 * std::cos(5 * a);
    return Vec2{r * std::cos(a), r * std::sin(a)};
  })));
  return lib;
}

}  // namespace

std::vector<ObjectShape> buildObjectLibrary() { return makeLibrary(); }

const ObjectShape& libraryObject(const std::string& id) {
  static const std::vector<ObjectShape> lib = makeLibrary();
  for (const auto& s : lib) {
    if (s.id() == id) return s;
  }
  throw DomainError("unknown object id: " + id);
}

// ---------------------------------------------------------------------------
// Config

void WorldConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("world config: ") + what);
  };
  require(k_n > 0.0, "k_n must be > 0");
  require(mu >= 0.0, "mu must be >= 0");
  require(c_rot > 0.0, "c_rot must be > 0");
  require(c_normal >= 0.0, "c_normal must be >= 0");
  require(v_stick > 0.0, "v_stick must be > 0");
  require(dt > 0.0, "dt must be > 0");
  require(substeps >= 1, "substeps must be >= 1");
  require(d_max > 0.0, "d_max must be > 0");
  require(noise_sigma >= 0.0, "noise_sigma must be >= 0");
  require(rho > 0.0, "rho must be > 0");
  require(gap_per_rad > 0.0, "gap_per_rad must be > 0");
  require(map_width >= 2 && map_height >= 1, "map size too small");
  require(pitch > 0.0, "pitch must be > 0");
  require(object_thickness > 0.0, "object_thickness must be > 0");
  require(gap_min > 0.0 && gap_max > gap_min, "gap limits invalid");
}

// ---------------------------------------------------------------------------
// Contact profile

namespace {

// Vertical extent of the rotated object over each sensor column, relative to
// the object centroid.
struct Profile {
  int width = 0;
  double x_center = 0.0;  // object centroid x
  std::vector<double> x;  // column centers, world
  std::vector<char> hit;
  std::vector<double> lo, hi;
  std::vector<double> slope_lo, slope_hi;
};

Profile computeProfile(const ObjectShape& shape, const Pose2& pose,
                       const WorldConfig& cfg) {
  Profile p;
  const int w = cfg.map_width;
  p.width = w;
  p.x_center = pose.x;
  p.x.resize(w);
  p.hit.assign(w, 0);
  p.lo.assign(w, std::numeric_limits<double>::infinity());
  p.hi.assign(w, -std::numeric_limits<double>::infinity());
  p.slope_lo.assign(w, 0.0);
  p.slope_hi.assign(w, 0.0);
  const double center = 0.5 * (w - 1);
  for (int j = 0; j < w; ++j) p.x[j] = (j - center) * cfg.pitch;

  auto columnRange = [&](double x0, double x1) {
    const int a = std::max(
        0, static_cast<int>(std::ceil((pose.x + x0) / cfg.pitch + center)));
    const int b = std::min(
        w - 1, static_cast<int>(std::floor((pose.x + x1) / cfg.pitch + center)));
    return std::pair{a, b};
  };

  if (shape.kind() == ObjectShape::Kind::kCircle) {
    const double r = shape.radius();
    const auto [a, b] = columnRange(-r, r);
    for (int j = a; j <= b; ++j) {
      const double dx = p.x[j] - pose.x;
      const double h2 = r * r - dx * dx;
      if (h2 <= 0.0) continue;
      const double h = std::sqrt(h2);
      p.hit[j] = 1;
      p.lo[j] = -h;
      p.hi[j] = h;
      p.slope_lo[j] = dx / h;
      p.slope_hi[j] = -dx / h;
    }
    return p;
  }

  const Polygon& body = shape.vertices();
  const std::size_t n = body.size();
  Polygon v(n);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = {c * body[i].x - s * body[i].y, s * body[i].x + c * body[i].y};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = v[i];
    const Vec2 e1 = v[(i + 1) % n];
    if (e0.x == e1.x) continue;
    const double slope = (e1.y - e0.y) / (e1.x - e0.x);
    const auto [a, b] = columnRange(std::min(e0.x, e1.x), std::max(e0.x, e1.x));
    for (int j = a; j <= b; ++j) {
      const double dx = p.x[j] - pose.x;
      const double y = e0.y + (dx - e0.x) * slope;
      p.hit[j] = 1;
      if (y < p.lo[j]) {
        p.lo[j] = y;
        p.slope_lo[j] = slope;
      }
      if (y > p.hi[j]) {
        p.hi[j] = y;
        p.slope_hi[j] = slope;
      }
    }
  }
  return p;
}

double depthLeft(const Profile& p, int j, double y, double gap) {
  return p.hit[j] ? std::max(0.0, -0.5 * gap - (y + p.lo[j])) : 0.0;
}

double depthRight(const Profile& p, int j, double y, double gap) {
  return p.hit[j] ? std::max(0.0, y + p.hi[j] - 0.5 * gap) : 0.0;
}

double balanceResidual(const Profile& p, double y, double gap) {
  double r = 0.0;
  for (int j = 0; j < p.width; ++j) {
    if (!p.hit[j]) continue;
    r += depthLeft(p, j, y, gap) - depthRight(p, j, y, gap);
  }
  return r;
}

// Nearest y at which the elastic normal forces of both belts cancel.
double balanceY(const Profile& p, double y0, double gap, double span) {
  const double r0 = balanceResidual(p, y0, gap);
  if (r0 == 0.0) return y0;
  double lo = y0;
  double hi = r0 > 0.0 ? y0 + span : y0 - span;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double r = balanceResidual(p, mid, gap);
    if ((r > 0.0) == (r0 > 0.0) && r != 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct PatchForces {
  bool left = false;
  bool right = false;
  int j_left = -1;
  int j_right = -1;
  double depth_left = 0.0;
  double depth_right = 0.0;
  double normal_left = 0.0;
  double normal_right = 0.0;
  double elastic_torque = 0.0;
  double reindent = 0.0;  // sum of q^2 dx over active samples, mm^3
};

PatchForces patchForces(const Profile& p, double y, double gap,
                        bool circle, const WorldConfig& cfg) {
  PatchForces f;
  double sum_l = 0.0, sum_r = 0.0, mom = 0.0, q2 = 0.0;
  for (int j = 0; j < p.width; ++j) {
    if (!p.hit[j]) continue;
    const double rx = p.x[j] - p.x_center;
    const double dl = depthLeft(p, j, y, gap);
    const double dr = depthRight(p, j, y, gap);
    if (dl > 0.0) {
      sum_l += dl;
      mom += rx * dl;
      if (!circle) {
        const double q = rx + p.slope_lo[j] * p.lo[j];
        q2 += q * q;
      }
      if (dl > f.depth_left) {
        f.depth_left = dl;
        f.j_left = j;
      }
    }
    if (dr > 0.0) {
      sum_r += dr;
      mom -= rx * dr;
      if (!circle) {
        const double q = rx + p.slope_hi[j] * p.hi[j];
        q2 += q * q;
      }
      if (dr > f.depth_right) {
        f.depth_right = dr;
        f.j_right = j;
      }
    }
  }
  f.left = f.j_left >= 0;
  f.right = f.j_right >= 0;
  f.normal_left = cfg.k_n * sum_l * cfg.pitch;
  f.normal_right = cfg.k_n * sum_r * cfg.pitch;
  f.elastic_torque = cfg.k_n * mom * cfg.pitch;
  f.reindent = q2 * cfg.pitch;
  return f;
}

std::string dumpState(const WorldState& s) {
  std::ostringstream os;
  os.precision(17);
  os << "object=" << s.object.id() << " x=" << s.pose.x << " y=" << s.pose.y
     << " theta=" << s.pose.theta << " gap=" << s.gap << " t=" << s.t
     << " omega=" << s.omega;
  return os.str();
}

// Solves the overdamped planar velocity for the current configuration.
SolveInfo solveVelocity(const Profile& p, const Pose2& pose, double gap,
                        bool circle, double u_left, double u_right,
                        const WorldConfig& cfg) {
  const PatchForces f = patchForces(p, pose.y, gap, circle, cfg);
  SolveInfo out;
  out.contact_left = f.left;
  out.contact_right = f.right;
  out.normal_left = f.normal_left;
  out.normal_right = f.normal_right;
  out.elastic_torque = f.elastic_torque;
  out.damping = cfg.c_rot + cfg.c_normal * f.reindent;
  if (f.left) out.p1 = {p.x[f.j_left], pose.y + p.lo[f.j_left]};
  if (f.right) out.p2 = {p.x[f.j_right], pose.y + p.hi[f.j_right]};
  const double a_l = f.left ? pose.y - out.p1.y : 0.0;
  const double a_r = f.right ? out.p2.y - pose.y : 0.0;
  out.d_obj = a_l + a_r;
  const double damping = out.damping;
  const double tau = f.elastic_torque;

  if (f.left && f.right && cfg.mu == 0.0) {
    out.omega = tau / damping;
  } else if (f.left && f.right) {
    const double d = out.d_obj;
    const double cap_l = cfg.mu * f.normal_left;
    const double cap_r = cfg.mu * f.normal_right;
    const double cap = std::min(cap_l, cap_r);
    // Friction force from the left belt on the object as a function of
    // omega, from force and torque balance.
    auto friction = [&](double w) { return (damping * w - tau) / d; };
    auto ratio = [](double f, double c) { return std::clamp(f / c, -1.0, 1.0); };
    auto residual = [&](double w) {
      const double fl = friction(w);
      return w * d - (u_left - u_right) +
             cfg.v_stick * (std::atanh(ratio(fl, cap_l)) +
                            std::atanh(ratio(fl, cap_r)));
    };
    double lo = (tau - d * cap) / damping;
    double hi = (tau + d * cap) / damping;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double r = residual(mid);
      if (r < 0.0) {
        lo = mid;
      } else if (r > 0.0) {
        hi = mid;
      } else {
        lo = hi = mid;
        break;
      }
    }
    const double w = 0.5 * (lo + hi);
    // Take the saturated side's slip from the residual identity; its own
    // atanh may be infinite.
    const double rl = ratio(friction(w), cap_l);
    const double rr = ratio(friction(w), cap_r);
    const double slip_l =
        std::abs(rl) <= std::abs(rr)
            ? -cfg.v_stick * std::atanh(rl)
            : w * d - (u_left - u_right) + cfg.v_stick * std::atanh(rr);
    // Both patches at the friction cap (equal capacities): split evenly.
    const double slip =
        std::isfinite(slip_l) ? slip_l : 0.5 * (w * d - (u_left - u_right));
    out.omega = w;
    out.v_x = u_left - w * a_l + slip;
  } else if (f.left) {
    out.omega = tau / damping;
    out.v_x = u_left - out.omega * a_l;
  } else if (f.right) {
    out.omega = tau / damping;
    out.v_x = u_right + out.omega * a_r;
  }
  return out;
}

}  // namespace

WorldState makeInitialState(const ObjectShape& shape, double initial_depth,
                            double x0) {
  WorldState s;
  s.object = shape;
  s.pose = {x0, 0.0, 0.0};
  double lo = shape.maxRadius();
  double hi = -lo;
  if (shape.kind() == ObjectShape::Kind::kCircle) {
    lo = -shape.radius();
    hi = shape.radius();
  } else {
    for (const Vec2& v : shape.vertices()) {
      lo = std::min(lo, v.y);
      hi = std::max(hi, v.y);
    }
  }
  // Center the object across the gap.
  s.pose.y = -0.5 * (lo + hi);
  s.gap = (hi - lo) - 2.0 * initial_depth;
  return s;
}

ContactSummary contact(const WorldState& state, const WorldConfig& cfg) {
  const Profile p = computeProfile(state.object, state.pose, cfg);
  ContactSummary out;
  for (int j = 0; j < p.width; ++j) {
    if (!p.hit[j]) continue;
    const double dl = depthLeft(p, j, state.pose.y, state.gap);
    const double dr = depthRight(p, j, state.pose.y, state.gap);
    if (dl > 0.0) {
      out.patch_left.push_back({p.x[j], dl});
      if (dl > out.depth_left) {
        out.depth_left = dl;
        out.p1 = {p.x[j], state.pose.y + p.lo[j]};
      }
    }
    if (dr > 0.0) {
      out.patch_right.push_back({p.x[j], dr});
      if (dr > out.depth_right) {
        out.depth_right = dr;
        out.p2 = {p.x[j], state.pose.y + p.hi[j]};
      }
    }
  }
  out.left = !out.patch_left.empty();
  out.right = !out.patch_right.empty();
  if (out.both()) {
    out.d_obj = out.p2.y - out.p1.y;
    out.tilt = std::atan2(out.p2.x - out.p1.x, out.p2.y - out.p1.y);
  }
  return out;
}

WorldState step(const WorldState& state, const BeltCommand& cmd,
                const WorldConfig& cfg) {
  WorldState s = state;
  const int n = cfg.substeps;
  const double h = cfg.dt / n;
  const bool circle = s.object.kind() == ObjectShape::Kind::kCircle;
  const double span = 2.0 * s.object.maxRadius() + cfg.gap_max;
  const double theta_start = s.pose.theta;
  // World-frame surface speeds of the belts.
  const double u_left = cmd.v_left;
  const double u_right = -cmd.v_right;

  Profile profile = computeProfile(s.object, s.pose, cfg);
  for (int k = 0; k < n; ++k) {
    // (a) gripper
    const double gap_next =
        std::clamp(s.gap + cmd.v_gap * h, cfg.gap_min, cfg.gap_max);
    s.encoders.gripper += (gap_next - s.gap) / cfg.gap_per_rad;
    s.gap = gap_next;
    // (b) belts
    s.belt_left += cmd.v_left * h;
    s.belt_right += cmd.v_right * h;
    s.encoders.left += cmd.v_left * h / cfg.rho;
    s.encoders.right += cmd.v_right * h / cfg.rho;
    // (c) quasi-static solve
    const double y_before = s.pose.y;
    s.pose.y = balanceY(profile, s.pose.y, s.gap, span);
    SolveInfo solve =
        solveVelocity(profile, s.pose, s.gap, circle, u_left, u_right, cfg);
    // (d) integrate, then restore normal-force balance at the new pose
    s.pose.x += solve.v_x * h;
    s.pose.theta += solve.omega * h;
    profile = computeProfile(s.object, s.pose, cfg);
    s.pose.y = balanceY(profile, s.pose.y, s.gap, span);
    solve.v_y = (s.pose.y - y_before) / h;
    s.omega = solve.omega;
    s.last_solve = solve;
    if (!std::isfinite(s.pose.x) || !std::isfinite(s.pose.y) ||
        !std::isfinite(s.pose.theta) || !std::isfinite(s.omega)) {
      throw NumericalError("non-finite world solve", dumpState(s));
    }
  }
  s.ticks += 1;
  s.t = s.ticks * cfg.dt;
  s.mean_omega = (s.pose.theta - theta_start) / cfg.dt;
  if (std::abs(s.pose.y) > s.gap) {
    throw ObjectLost("object " + s.object.id() + " ejected from the gap (" +
                     dumpState(s) + ")");
  }
  if (std::abs(s.pose.x) > 0.5 * cfg.sensorLength()) {
    throw ObjectLost("object " + s.object.id() + " slid off the sensors (" +
                     dumpState(s) + ")");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Rendering

double DepthMap::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double DepthMap::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

DepthMap renderDepth(const WorldState& state, Side side,
                     const WorldConfig& cfg) {
  const Profile p = computeProfile(state.object, state.pose, cfg);
  DepthMap map;
  map.width = cfg.map_width;
  map.height = cfg.map_height;
  map.pitch = cfg.pitch;
  map.d_max = cfg.d_max;
  map.values.assign(static_cast<std::size_t>(map.width) * map.height, 0.0);

  std::vector<double> column(map.width, 0.0);
  bool any = false;
  for (int j = 0; j < map.width; ++j) {
    const double d = side == Side::kLeft
                         ? depthLeft(p, j, state.pose.y, state.gap)
                         : depthRight(p, j, state.pose.y, state.gap);
    column[j] = std::min(d, cfg.d_max);
    any = any || d > 0.0;
  }
  if (!any) return map;

  const double half = 0.5 * cfg.object_thickness;
  const double row_center = 0.5 * (map.height - 1);
  std::mt19937_64 rng(deriveSeed(cfg.seed, static_cast<std::uint64_t>(state.ticks),
                                 side == Side::kLeft ? 1u : 2u));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < map.height; ++i) {
    const double z = (i - row_center) * cfg.pitch;
    if (std::abs(z) > half) continue;
    double* row = &map.values[static_cast<std::size_t>(i) * map.width];
    for (int j = 0; j < map.width; ++j) {
      if (column[j] <= 0.0) continue;
      double v = column[j];
      if (cfg.noise_sigma > 0.0) {
        v = std::clamp(v + cfg.noise_sigma * noise(rng), 0.0, cfg.d_max);
      }
      row[j] = v;
    }
  }
  return map;
}

GroundTruth groundTruth(const WorldState& state) {
  return {state.pose.theta, state.omega, state.pose.x};
}

std::string encodePgm(const DepthMap& map, const std::string& comment) {
  std::string out = "P5\n";
  std::istringstream lines(comment);
  for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  out += std::to_string(map.width) + " " + std::to_string(map.height) +
         "\n65535\n";
  out.reserve(out.size() + map.values.size() * 2);
  for (double v : map.values) {
    const long um = std::lround(std::clamp(v * 1000.0, 0.0, 65535.0));
    out.push_back(static_cast<char>((um >> 8) & 0xff));
    out.push_back(static_cast<char>(um & 0xff));
  }
  return out;
}

}  // namespace dtactive::world
