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

#include "dtactive/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "dtactive/errors.hpp"
#include "dtactive/rng.hpp"

namespace dtactive::harness {

static_assert(std::endian::native == std::endian::little,
              "feature sidecars are written in host order");

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string formatG(double v, int digits = 9) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

bool contains(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Sensing half of a tick shared by collection and online tracking: render,
// summarize, and measure the commanded angular velocity over the last step.
struct Sensing {
  world::DepthMap left;
  world::DepthMap right;
  estimator::TactileSummary summary;
  estimator::EncoderVelocity::Reading velocity;
  double omega_c = 0.0;
};

class Sensor {
 public:
  Sensor(const world::WorldState& initial, const world::WorldConfig& cfg,
         double filter)
      : cfg_(cfg),
        calibration_{initial.gap, cfg.gap_per_rad},
        velocity_(cfg.rho, cfg.dt, filter) {}

  Sensing sense(const world::WorldState& s, bool first) {
    Sensing out;
    out.left = world::renderDepth(s, world::Side::kLeft, cfg_);
    out.right = world::renderDepth(s, world::Side::kRight, cfg_);
    out.summary = tracker_.update(estimator::summarize(
        out.left, out.right, calibration_.gap(s.encoders.gripper)));
    out.velocity = velocity_.update(s.encoders);
    if (!first) {
      out.omega_c = estimator::commandOmega(
          out.velocity.v_left, out.velocity.v_right, out.summary.d_obj);
    }
    return out;
  }

 private:
  const world::WorldConfig& cfg_;
  estimator::GapCalibration calibration_;
  estimator::EncoderVelocity velocity_;
  estimator::TactileTracker tracker_;
};

Frame makeFrame(const world::WorldState& s, const Sensing& in,
                const Setup& setup, bool first) {
  Frame f;
  f.t = s.t;
  f.encoders = s.encoders;
  f.v_left = in.velocity.v_left;
  f.v_right = in.velocity.v_right;
  f.v_left_raw = in.velocity.raw_left;
  f.v_right_raw = in.velocity.raw_right;
  f.summary = in.summary;
  f.omega_c = in.omega_c;
  f.theta_gt = s.pose.theta;
  f.omega_gt = first ? 0.0 : s.mean_omega;
  f.x_gt = s.pose.x;
  f.pooled = learning::poolMaps(in.left, in.right, setup.features);
  return f;
}

void recordCommand(Frame& f, const control::ControlState& cs,
                   const world::BeltCommand& cmd) {
  f.omega_d = cs.omega_d;
  f.u = cs.u;
  f.v_comp = cs.v_comp;
  f.v_gap = cmd.v_gap;
  f.cmd_left = cmd.v_left;
  f.cmd_right = cmd.v_right;
}

}  // namespace

void HarnessConfig::validate() const {
  if (speeds.empty()) throw DomainError("harness.speeds must not be empty");
  for (double w : speeds) {
    if (!(w > 0.0)) throw DomainError("harness.speeds must be > 0");
  }
  if (!(initial_depth > 0.0)) {
    throw DomainError("harness.initial_depth must be > 0");
  }
  if (!(max_time_factor >= 1.0)) {
    throw DomainError("harness.max_time_factor must be >= 1");
  }
  if (!(amplitude >= 0.0)) throw DomainError("harness.amplitude must be >= 0");
  if (!(period > 0.0)) throw DomainError("harness.period must be > 0");
  if (periods < 1) throw DomainError("harness.periods must be >= 1");
  if (!(velocity_filter > 0.0 && velocity_filter <= 1.0)) {
    throw DomainError("harness.velocity_filter must be in (0, 1]");
  }
}

std::uint64_t rolloutSeed(std::uint64_t seed, const std::string& object_id,
                          std::uint64_t index) {
  return deriveSeed(seed, fnv1a(object_id), index);
}

// ---------------------------------------------------------------------------
// Collection

Trajectory collectOne(const world::ObjectShape& object, double omega_c,
                      const Setup& setup, std::uint64_t index,
                      const FrameSink& sink) {
  if (!(omega_c > 0.0)) throw DomainError("collection speed must be > 0");
  world::WorldConfig cfg = setup.world;
  cfg.seed = rolloutSeed(setup.seed, object.id(), index);
  Trajectory traj;
  traj.object_id = object.id();
  traj.profile = "const:" + formatG(omega_c);
  traj.seed = cfg.seed;

  const double dt = cfg.dt;
  const auto max_ticks = static_cast<std::int64_t>(std::ceil(
      setup.harness.max_time_factor * 2.0 * std::numbers::pi / omega_c / dt));
  world::WorldState s =
      world::makeInitialState(object, setup.harness.initial_depth);
  Sensor sensor(s, cfg, setup.harness.velocity_filter);
  control::ControlState cs;
  double theta_raw = 0.0;
  try {
    for (std::int64_t i = 0;; ++i) {
      const bool first = i == 0;
      const Sensing in = sensor.sense(s, first);
      if (sink) sink(traj, traj.frames.size(), in.left, in.right);
      Frame f = makeFrame(s, in, setup, first);
      theta_raw += in.omega_c * dt;
      f.theta_hat = theta_raw;
      if (s.pose.theta >= 2.0 * std::numbers::pi || i >= max_ticks) {
        traj.frames.push_back(std::move(f));
        break;
      }
      const world::BeltCommand cmd =
          control::holdOmegaStep(omega_c, in.summary, setup.gains, cs, dt);
      recordCommand(f, cs, cmd);
      traj.frames.push_back(std::move(f));
      s = world::step(s, cmd, cfg);
    }
  } catch (const ObjectLost& e) {
    traj.failed = true;
    traj.failure = e.what();
  }
  return traj;
}

std::vector<Trajectory> collect(const Setup& setup, const FrameSink& sink) {
  setup.harness.validate();
  const auto& speeds = setup.harness.speeds;
  std::vector<Trajectory> out;
  for (const std::string& id : setup.harness.trained) {
    const world::ObjectShape& obj = world::libraryObject(id);
    for (std::size_t k = 0; k < speeds.size(); ++k) {
      out.push_back(collectOne(obj, speeds[k], setup, k, sink));
    }
  }
  const std::size_t mid = speeds.size() / 2;
  for (const std::string& id : setup.harness.novel) {
    out.push_back(
        collectOne(world::libraryObject(id), speeds[mid], setup, mid, sink));
  }
  return out;
}

Split split(const std::vector<Trajectory>& data, const HarnessConfig& h,
            std::uint64_t seed) {
  std::map<std::string, std::vector<const Trajectory*>> by_object;
  for (const Trajectory& t : data) by_object[t.object_id].push_back(&t);
  Split out;
  std::vector<const Trajectory*> novel_tests;
  for (const Trajectory& t : data) {
    if (!contains(h.trained, t.object_id) && !contains(h.novel, t.object_id)) {
      throw DatasetError("trajectory of unknown object " + t.object_id);
    }
  }
  for (const std::string& id : h.trained) {
    const auto it = by_object.find(id);
    const std::size_t n = it == by_object.end() ? 0 : it->second.size();
    if (n != h.speeds.size() || n < 2) {
      throw DatasetError("object " + id + " has " + std::to_string(n) +
                         " trajectories, expected " +
                         std::to_string(h.speeds.size()));
    }
    const std::size_t pick = deriveSeed(seed, fnv1a(id), 0x5b1) % n;
    for (std::size_t k = 0; k < n; ++k) {
      (k == pick ? out.test : out.train).push_back(it->second[k]);
    }
  }
  for (const std::string& id : h.novel) {
    const auto it = by_object.find(id);
    if (it == by_object.end()) {
      throw DatasetError("novel object " + id + " has no trajectory");
    }
    for (const Trajectory* t : it->second) novel_tests.push_back(t);
  }
  out.test.insert(out.test.end(), novel_tests.begin(), novel_tests.end());
  return out;
}

std::vector<learning::Sample> samples(
    const std::vector<const Trajectory*>& trajectories, learning::Role role,
    const learning::FeatureConfig& features) {
  std::vector<learning::Sample> out;
  for (const Trajectory* traj : trajectories) {
    const auto& fr = traj->frames;
    for (std::size_t i = 1; i < fr.size(); ++i) {
      learning::Sample s;
      s.omega_command = fr[i].omega_c;
      s.label = fr[i].omega_c != 0.0 ? fr[i].omega_gt / fr[i].omega_c
                                     : std::numeric_limits<double>::quiet_NaN();
      // The rectifier sees the frame it corrects; the policy sees the maps
      // the command was chosen from and the velocity that resulted.
      s.features = role == learning::Role::kRectifier
                       ? learning::assemble(fr[i].pooled, fr[i].omega_c,
                                            features)
                       : learning::assemble(fr[i - 1].pooled, fr[i].omega_gt,
                                            features);
      out.push_back(std::move(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Offline replay

std::vector<double> replayTheta(const Trajectory& traj, ReplayMode mode,
                                const learning::ModelParams* model,
                                const Setup& setup) {
  if (mode == ReplayMode::kModel && !model) {
    throw DomainError("model replay needs a model");
  }
  std::vector<double> theta;
  if (traj.frames.empty()) return theta;
  theta.reserve(traj.frames.size());
  estimator::OrientationEstimate est;
  est.theta = traj.frames.front().theta_gt;
  theta.push_back(est.theta);
  for (std::size_t i = 1; i < traj.frames.size(); ++i) {
    const Frame& f = traj.frames[i];
    double k = 1.0;
    if (mode == ReplayMode::kOracle) {
      if (f.omega_c != 0.0) k = f.omega_gt / f.omega_c;
    } else if (mode == ReplayMode::kModel) {
      k = estimator::predictRatio(*model, f.pooled, f.omega_c, setup.features);
    }
    est = estimator::update(est, k, f.omega_c, setup.world.dt);
    theta.push_back(est.theta);
  }
  return theta;
}

double meanAbsErrorDeg(const Trajectory& traj,
                       const std::vector<double>& theta_hat) {
  if (theta_hat.size() != traj.frames.size() || theta_hat.empty()) {
    throw DomainError("estimate length does not match trajectory");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < theta_hat.size(); ++i) {
    s += std::abs(theta_hat[i] - traj.frames[i].theta_gt);
  }
  return s / static_cast<double>(theta_hat.size()) * kRadToDeg;
}

std::vector<OfflineEntry> evalOffline(
    const learning::ModelParams& model,
    const std::vector<const Trajectory*>& test, const Setup& setup) {
  if (model.role() != learning::Role::kRectifier) {
    throw LearningError("offline evaluation needs a rectification (N) model");
  }
  std::vector<OfflineEntry> out;
  std::vector<int> counts;
  for (const Trajectory* traj : test) {
    if (traj->frames.empty()) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const OfflineEntry& e) {
      return e.object_id == traj->object_id;
    });
    if (it == out.end()) {
      OfflineEntry e;
      e.object_id = traj->object_id;
      e.novel = contains(setup.harness.novel, traj->object_id);
      out.push_back(e);
      counts.push_back(0);
      it = out.end() - 1;
    }
    const std::size_t idx = it - out.begin();
    it->raw_deg += meanAbsErrorDeg(
        *traj, replayTheta(*traj, ReplayMode::kRaw, nullptr, setup));
    it->rectified_deg += meanAbsErrorDeg(
        *traj, replayTheta(*traj, ReplayMode::kModel, &model, setup));
    it->oracle_deg += meanAbsErrorDeg(
        *traj, replayTheta(*traj, ReplayMode::kOracle, nullptr, setup));
    it->failed = it->failed || traj->failed;
    ++counts[idx];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].raw_deg /= counts[i];
    out[i].rectified_deg /= counts[i];
    out[i].oracle_deg /= counts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Online tracking

double desiredTrajectory(double t, double amplitude, double period) {
  if (!(period > 0.0)) throw DomainError("period must be positive");
  return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
}

const char* modeName(Mode m) {
  return m == Mode::kOpenLoop ? "open-loop" : "ours";
}

Mode parseMode(const std::string& name) {
  if (name == "open-loop") return Mode::kOpenLoop;
  if (name == "ours") return Mode::kOurs;
  throw DomainError("unknown mode: " + name);
}

OnlineResult evalOnline(const world::ObjectShape& object, Mode mode,
                        const learning::ModelParams* rectifier,
                        const learning::ModelParams* policy,
                        const Setup& setup) {
  if (mode == Mode::kOurs && (!rectifier || !policy)) {
    throw DomainError("mode ours needs both the N and pi models");
  }
  if (mode == Mode::kOpenLoop) {
    rectifier = nullptr;
    policy = nullptr;
  }
  const HarnessConfig& h = setup.harness;
  world::WorldConfig cfg = setup.world;
  // Both modes see the same noise realization.
  cfg.seed = rolloutSeed(setup.seed, object.id(), 1000);
  const double dt = cfg.dt;

  OnlineResult r;
  r.object_id = object.id();
  r.mode = mode;
  Trajectory& traj = r.trajectory;
  traj.object_id = object.id();
  traj.profile = "sine:" + formatG(h.amplitude) + ":" + formatG(h.period);
  traj.seed = cfg.seed;

  const auto ticks =
      static_cast<std::int64_t>(std::llround(h.periods * h.period / dt));
  world::WorldState s = world::makeInitialState(object, h.initial_depth);
  Sensor sensor(s, cfg, h.velocity_filter);
  control::ControlState cs;
  estimator::OrientationEstimate est;
  try {
    for (std::int64_t i = 0; i < ticks; ++i) {
      const bool first = i == 0;
      const Sensing in = sensor.sense(s, first);
      Frame f = makeFrame(s, in, setup, first);
      if (!first) {
        est = estimator::update(est, in.left, in.right, in.omega_c, dt,
                                rectifier, setup.features);
      }
      f.theta_hat = est.theta;
      f.k_hat = est.k;
      const double t = i * dt;
      f.theta_d = desiredTrajectory(t, h.amplitude, h.period) / kRadToDeg;
      control::TickInput tick{f.theta_d, in.summary, &in.left, &in.right,
                              est.theta};
      const world::BeltCommand cmd = control::controlStep(
          tick, setup.gains, policy, cs, dt, setup.features);
      recordCommand(f, cs, cmd);
      traj.frames.push_back(std::move(f));
      s = world::step(s, cmd, cfg);
    }
  } catch (const ObjectLost& e) {
    r.failed = true;
    r.failure = e.what();
    traj.failed = true;
    traj.failure = e.what();
  }
  std::vector<double> desired, actual, estimate;
  for (const Frame& f : traj.frames) {
    desired.push_back(f.theta_d * kRadToDeg);
    actual.push_back(f.theta_gt * kRadToDeg);
    estimate.push_back(f.theta_hat * kRadToDeg);
  }
  if (!actual.empty()) r.rmse_deg = rmse(desired, actual);
  if (actual.size() >= 4) {
    r.rms_jerk = rmsJerk(actual, dt);
    r.rms_jerk_hat = rmsJerk(estimate, dt);
  }
  return r;
}

double rmse(const std::vector<double>& desired,
            const std::vector<double>& actual) {
  if (desired.size() != actual.size()) {
    throw DomainError("rmse: series lengths differ");
  }
  if (desired.empty()) throw DomainError("rmse: empty series");
  double s = 0.0;
  for (std::size_t i = 0; i < desired.size(); ++i) {
    const double e = desired[i] - actual[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(desired.size()));
}

double rmsJerk(const std::vector<double>& series, double dt) {
  if (series.size() < 4) throw DomainError("rms jerk needs >= 4 samples");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  std::vector<double> d = series;
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
    d.pop_back();
  }
  double s = 0.0;
  for (double v : d) s += v * v;
  return std::sqrt(s / static_cast<double>(d.size())) / (dt * dt * dt);
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr const char* kColumns[] = {
    "t",         "theta_G",   "theta_L",    "theta_R",   "v_L",
    "v_R",       "v_L_raw",   "v_R_raw",    "S",         "centroid_x",
    "d_obj",     "valid",     "omega_c",    "theta_gt",  "omega_gt",
    "x_gt",      "theta_hat", "k_hat",      "theta_d",   "omega_d",
    "u",         "v_comp",    "v_gap",      "cmd_L",     "cmd_R"};
constexpr std::size_t kColumnCount = std::size(kColumns);

std::vector<double> row(const Frame& f) {
  return {f.t,
          f.encoders.gripper,
          f.encoders.left,
          f.encoders.right,
          f.v_left,
          f.v_right,
          f.v_left_raw,
          f.v_right_raw,
          f.summary.depth_sum,
          f.summary.centroid_x,
          f.summary.d_obj,
          f.summary.valid ? 1.0 : 0.0,
          f.omega_c,
          f.theta_gt,
          f.omega_gt,
          f.x_gt,
          f.theta_hat,
          f.k_hat,
          f.theta_d,
          f.omega_d,
          f.u,
          f.v_comp,
          f.v_gap,
          f.cmd_left,
          f.cmd_right};
}

Frame fromRow(const std::vector<double>& v) {
  Frame f;
  f.t = v[0];
  f.encoders = {v[1], v[2], v[3]};
  f.v_left = v[4];
  f.v_right = v[5];
  f.v_left_raw = v[6];
  f.v_right_raw = v[7];
  f.summary.depth_sum = v[8];
  f.summary.centroid_x = v[9];
  f.summary.d_obj = v[10];
  f.summary.valid = v[11] != 0.0;
  f.omega_c = v[12];
  f.theta_gt = v[13];
  f.omega_gt = v[14];
  f.x_gt = v[15];
  f.theta_hat = v[16];
  f.k_hat = v[17];
  f.theta_d = v[18];
  f.omega_d = v[19];
  f.u = v[20];
  f.v_comp = v[21];
  f.v_gap = v[22];
  f.cmd_left = v[23];
  f.cmd_right = v[24];
  return f;
}

void putDouble(std::string& out, double v) {
  char b[sizeof(double)];
  std::memcpy(b, &v, sizeof(double));
  out.append(b, sizeof(double));
}

// Single-line form of a failure message for the CSV header.
std::string oneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

TrajectoryFiles encodeTrajectory(const Trajectory& traj,
                                 const std::string& features_name,
                                 const std::string& provenance) {
  TrajectoryFiles out;
  std::string& csv = out.csv;
  csv += "# dtactive trajectory v1\n";
  if (!provenance.empty()) csv += "# " + provenance + "\n";
  csv += "# object=" + traj.object_id + " profile=" + traj.profile +
         " seed=" + std::to_string(traj.seed) +
         " failed=" + (traj.failed ? "1" : "0") +
         " features=" + features_name + "\n";
  if (traj.failed) csv += "# failure=" + oneLine(traj.failure) + "\n";
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    if (c) csv += ',';
    csv += kColumns[c];
  }
  csv += '\n';
  for (const Frame& f : traj.frames) {
    const auto v = row(f);
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (c) csv += ',';
      csv += formatG(v[c]);
    }
    csv += '\n';
    for (double p : f.pooled) putDouble(out.features, p);
    putDouble(out.features, f.omega_c);
    putDouble(out.features, f.omega_gt);
  }
  return out;
}

Trajectory decodeTrajectory(const std::string& csv,
                            const std::string& features,
                            const learning::FeatureConfig& fc) {
  Trajectory traj;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream kv(line.substr(1));
      for (std::string tok; kv >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "object") traj.object_id = val;
        if (key == "profile") traj.profile = val;
        if (key == "seed") traj.seed = std::stoull(val);
        if (key == "failed") traj.failed = val == "1";
      }
      const auto pos = line.find("# failure=");
      if (pos == 0) traj.failure = line.substr(10);
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> v;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DatasetError("bad trajectory cell: " + cell);
      }
    }
    if (v.size() != kColumnCount) {
      throw DatasetError("trajectory row has " + std::to_string(v.size()) +
                         " columns, expected " + std::to_string(kColumnCount));
    }
    traj.frames.push_back(fromRow(v));
  }
  if (traj.object_id.empty()) throw DatasetError("trajectory lacks an object");
  const std::size_t pooled = fc.length() - 1;
  const std::size_t per_row = (pooled + 2) * sizeof(double);
  if (features.size() != per_row * traj.frames.size()) {
    throw DatasetError("feature sidecar size does not match " +
                       std::to_string(traj.frames.size()) + " frames");
  }
  const char* p = features.data();
  for (Frame& f : traj.frames) {
    f.pooled.resize(pooled);
    std::memcpy(f.pooled.data(), p, pooled * sizeof(double));
    p += pooled * sizeof(double);
    std::memcpy(&f.omega_c, p, sizeof(double));
    std::memcpy(&f.omega_gt, p + sizeof(double), sizeof(double));
    p += 2 * sizeof(double);
  }
  return traj;
}

std::string reportText(const Report& r, const std::string& provenance) {
  std::ostringstream os;
  os << "# dtactive report\n";
  if (!provenance.empty()) os << "# " << provenance << "\n";
  for (const OfflineEntry& e : r.offline) {
    os << "\n[offline " << e.object_id << "]\n"
       << "set: " << (e.novel ? "novel" : "trained") << "\n"
       << "raw_error_deg: " << formatG(e.raw_deg) << "\n"
       << "rectified_error_deg: " << formatG(e.rectified_deg) << "\n"
       << "oracle_error_deg: " << formatG(e.oracle_deg) << "\n"
       << "reduction_deg: " << formatG(e.reduction()) << "\n"
       << "failed: " << (e.failed ? 1 : 0) << "\n";
  }
  for (const OnlineResult& o : r.online) {
    os << "\n[online " << o.object_id << " " << modeName(o.mode) << "]\n"
       << "rmse_deg: " << formatG(o.rmse_deg) << "\n"
       << "rms_jerk_deg_s3: " << formatG(o.rms_jerk) << "\n"
       << "rms_jerk_estimate_deg_s3: " << formatG(o.rms_jerk_hat) << "\n"
       << "failed: " << (o.failed ? 1 : 0) << "\n";
    if (o.failed) os << "failure: " << oneLine(o.failure) << "\n";
  }
  return os.str();
}

std::string reportJson(const Report& r, const std::string& provenance) {
  nlohmann::ordered_json j;
  j["provenance"] = provenance;
  j["offline"] = nlohmann::ordered_json::array();
  for (const OfflineEntry& e : r.offline) {
    j["offline"].push_back({{"object", e.object_id},
                            {"novel", e.novel},
                            {"raw_error_deg", e.raw_deg},
                            {"rectified_error_deg", e.rectified_deg},
                            {"oracle_error_deg", e.oracle_deg},
                            {"reduction_deg", e.reduction()},
                            {"failed", e.failed}});
  }
  j["online"] = nlohmann::ordered_json::array();
  for (const OnlineResult& o : r.online) {
    j["online"].push_back({{"object", o.object_id},
                           {"mode", modeName(o.mode)},
                           {"rmse_deg", o.rmse_deg},
                           {"rms_jerk_deg_s3", o.rms_jerk},
                           {"rms_jerk_estimate_deg_s3", o.rms_jerk_hat},
                           {"failed", o.failed}});
  }
  return j.dump(2) + "\n";
}

}  // namespace dtactive::harness
