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

#include "dtactive/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dtactive/errors.hpp"
#include "dtactive/rng.hpp"

namespace dtactive::config {

namespace {

// Top-level key ignored by the reader, for notices in config files.
constexpr const char* kCommentKey = "//";

using json = nlohmann::ordered_json;

// Range predicates return the expectation text on violation.
using Check = const char* (*)(double);

const char* any(double v) { return std::isfinite(v) ? nullptr : "must be finite"; }
const char* positive(double v) { return v > 0.0 ? nullptr : "must be > 0"; }
const char* nonNegative(double v) { return v >= 0.0 ? nullptr : "must be >= 0"; }
const char* atLeastOne(double v) { return v >= 1.0 ? nullptr : "must be >= 1"; }
const char* atLeastTwo(double v) { return v >= 2.0 ? nullptr : "must be >= 2"; }
const char* unitHalfOpen(double v) {
  return v >= 0.0 && v < 1.0 ? nullptr : "must be in [0, 1)";
}
const char* unitClosed(double v) {
  return v >= 0.0 && v <= 1.0 ? nullptr : "must be in [0, 1]";
}
const char* unitOpenClosed(double v) {
  return v > 0.0 && v <= 1.0 ? nullptr : "must be in (0, 1]";
}

// One description of every field drives parsing, serialization and range
// checks.
template <class V>
void describe(RunConfig& c, V& v) {
  v.top("seed", c.seed);

  v.begin("world");
  v("k_n", c.world.k_n, positive);
  v("mu", c.world.mu, nonNegative);
  v("c_rot", c.world.c_rot, positive);
  v("c_normal", c.world.c_normal, nonNegative);
  v("v_stick", c.world.v_stick, positive);
  v("dt", c.world.dt, positive);
  v("substeps", c.world.substeps, atLeastOne);
  v("d_max", c.world.d_max, positive);
  v("noise_sigma", c.world.noise_sigma, nonNegative);
  v("rho", c.world.rho, positive);
  v("gap_per_rad", c.world.gap_per_rad, positive);
  v("map_width", c.world.map_width, atLeastTwo);
  v("map_height", c.world.map_height, atLeastOne);
  v("pitch", c.world.pitch, positive);
  v("object_thickness", c.world.object_thickness, positive);
  v("gap_min", c.world.gap_min, positive);
  v("gap_max", c.world.gap_max, positive);
  v.end();

  v.begin("gains");
  v("grip_kp", c.gains.grip.kp, nonNegative);
  v("grip_kd", c.gains.grip.kd, nonNegative);
  v("orientation_kp", c.gains.orientation.kp, nonNegative);
  v("orientation_kd", c.gains.orientation.kd, nonNegative);
  v("position_kp", c.gains.position.kp, nonNegative);
  v("position_kd", c.gains.position.kd, nonNegative);
  v("s_ref", c.gains.s_ref, positive);
  v("x_center", c.gains.x_center, any);
  v("v_gap_max", c.gains.v_gap_max, positive);
  v("v_belt_max", c.gains.v_belt_max, positive);
  v("omega_max", c.gains.omega_max, positive);
  v("u_min", c.gains.u_min, positive);
  v("u_max", c.gains.u_max, positive);
  v.end();

  v.begin("training");
  v.optimizer("optimizer", c.training.optimizer);
  v("learning_rate", c.training.learning_rate, positive);
  v("lr_decay", c.training.lr_decay, unitClosed);
  v("epochs", c.training.epochs, atLeastOne);
  v("batch_size", c.training.batch_size, atLeastOne);
  v("momentum", c.training.momentum, unitHalfOpen);
  v("omega_floor", c.training.omega_floor, nonNegative);
  v("hidden", c.training.hidden, atLeastOne);
  v("standardize", c.training.standardize);
  v.end();

  v.begin("features");
  v("pool_cols", c.features.pool_cols, atLeastOne);
  v("pool_rows", c.features.pool_rows, atLeastOne);
  v("omega_max", c.features.omega_max, positive);
  v.end();

  v.begin("harness");
  v("speeds", c.harness.speeds, positive);
  v("trained", c.harness.trained);
  v("novel", c.harness.novel);
  v("initial_depth", c.harness.initial_depth, positive);
  v("max_time_factor", c.harness.max_time_factor, atLeastOne);
  v("amplitude", c.harness.amplitude, nonNegative);
  v("period", c.harness.period, positive);
  v("periods", c.harness.periods, atLeastOne);
  v("velocity_filter", c.harness.velocity_filter, unitOpenClosed);
  v.end();

  v.begin("paths");
  v("data_dir", c.paths.data_dir);
  v("model_dir", c.paths.model_dir);
  v("report_dir", c.paths.report_dir);
  v.end();
}

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  void top(const char* key, std::uint64_t& out) {
    top_seen_.insert(key);
    if (!root_.contains(key)) return;
    const json& j = root_.at(key);
    if (!j.is_number_unsigned()) fail(key, "expected a non-negative integer");
    out = j.get<std::uint64_t>();
  }

  void begin(const char* section) {
    section_ = section;
    top_seen_.insert(section);
    seen_.clear();
    cur_ = nullptr;
    if (!root_.contains(section)) return;
    cur_ = &root_.at(section);
    if (!cur_->is_object()) fail(section, "expected an object");
  }

  void end() {
    if (!cur_) return;
    for (const auto& item : cur_->items()) {
      if (!seen_.count(item.key())) {
        throw ConfigParseError("unknown key: " + section_ + "." + item.key());
      }
    }
  }

  void finish() {
    for (const auto& item : root_.items()) {
      if (item.key() == kCommentKey) continue;
      if (!top_seen_.count(item.key())) {
        throw ConfigParseError("unknown key: " + item.key());
      }
    }
  }

  void operator()(const char* key, double& out, Check = nullptr) {
    if (const json* j = find(key)) {
      if (!j->is_number()) fail(key, "expected a number");
      out = j->get<double>();
    }
  }

  void operator()(const char* key, int& out, Check = nullptr) {
    if (const json* j = find(key)) {
      if (!j->is_number_integer()) fail(key, "expected an integer");
      out = j->get<int>();
    }
  }

  void optimizer(const char* key, learning::Optimizer& out) {
    if (const json* j = find(key)) {
      if (!j->is_string()) fail(key, "expected a string");
      try {
        out = learning::parseOptimizer(j->get<std::string>());
      } catch (const DomainError&) {
        throw ConfigRangeError(section_ + "." + key,
                               "must be \"momentum\" or \"adam\"");
      }
    }
  }

  void operator()(const char* key, bool& out) {
    if (const json* j = find(key)) {
      if (!j->is_boolean()) fail(key, "expected true or false");
      out = j->get<bool>();
    }
  }

  void operator()(const char* key, std::string& out) {
    if (const json* j = find(key)) {
      if (!j->is_string()) fail(key, "expected a string");
      out = j->get<std::string>();
    }
  }

  template <class T>
  void operator()(const char* key, std::vector<T>& out, Check = nullptr) {
    if (const json* j = find(key)) {
      if (!j->is_array()) fail(key, "expected an array");
      std::vector<T> v;
      for (const json& e : *j) {
        if constexpr (std::is_same_v<T, std::string>) {
          if (!e.is_string()) fail(key, "expected strings");
        } else if constexpr (std::is_integral_v<T>) {
          if (!e.is_number_integer()) fail(key, "expected integers");
        } else {
          if (!e.is_number()) fail(key, "expected numbers");
        }
        v.push_back(e.get<T>());
      }
      out = std::move(v);
    }
  }

  void operator()(const char* key, std::vector<std::string>& out) {
    operator()<std::string>(key, out, nullptr);
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    if (!cur_ || !cur_->contains(key)) return nullptr;
    return &cur_->at(key);
  }

  [[noreturn]] void fail(const std::string& key, const char* what) {
    const std::string full = cur_ && key != section_ ? section_ + "." + key : key;
    throw ConfigParseError(full + ": " + what);
  }

  const json& root_;
  const json* cur_ = nullptr;
  std::string section_;
  std::set<std::string> seen_;
  std::set<std::string> top_seen_;
};

class Writer {
 public:
  void top(const char* key, std::uint64_t& v) { root[key] = v; }
  void begin(const char* section) { section_ = section; root[section] = json::object(); }
  void end() {}
  void optimizer(const char* key, learning::Optimizer& o) {
    root[section_][key] = learning::optimizerName(o);
  }
  template <class T>
  void operator()(const char* key, T& v, Check = nullptr) {
    root[section_][key] = v;
  }

  json root = json::object();

 private:
  std::string section_;
};

class Validator {
 public:
  void top(const char*, std::uint64_t&) {}
  void begin(const char* section) { section_ = section; }
  void end() {}
  void optimizer(const char*, learning::Optimizer&) {}

  void operator()(const char* key, double& v, Check check) { apply(key, v, check); }
  void operator()(const char* key, int& v, Check check) { apply(key, v, check); }
  void operator()(const char*, bool&) {}
  void operator()(const char* key, std::string& v) {
    if (v.empty()) throw ConfigRangeError(section_ + "." + key, "must not be empty");
  }
  template <class T>
  void operator()(const char* key, std::vector<T>& v, Check check) {
    if (v.empty()) throw ConfigRangeError(section_ + "." + key, "must not be empty");
    for (const T& e : v) apply(key, static_cast<double>(e), check);
  }
  void operator()(const char* key, std::vector<std::string>& v) {
    for (const std::string& id : v) {
      try {
        world::libraryObject(id);
      } catch (const DomainError&) {
        throw ConfigRangeError(section_ + "." + key,
                               "contains unknown object id " + id);
      }
    }
  }

 private:
  void apply(const char* key, double v, Check check) {
    if (!std::isfinite(v)) {
      throw ConfigRangeError(section_ + "." + key, "must be finite");
    }
    if (check) {
      if (const char* why = check(v)) {
        throw ConfigRangeError(section_ + "." + key, why);
      }
    }
  }

  std::string section_;
};

}  // namespace

void RunConfig::validate() const {
  Validator v;
  describe(const_cast<RunConfig&>(*this), v);
  if (!(world.gap_max > world.gap_min)) {
    throw ConfigRangeError("world.gap_max", "must exceed world.gap_min");
  }
  if (!(gains.u_max >= gains.u_min)) {
    throw ConfigRangeError("gains.u_max", "must be >= gains.u_min");
  }
  if (features.pool_cols > world.map_width) {
    throw ConfigRangeError("features.pool_cols", "must be <= world.map_width");
  }
  if (features.pool_rows > world.map_height) {
    throw ConfigRangeError("features.pool_rows", "must be <= world.map_height");
  }
  if (harness.trained.empty()) {
    throw ConfigRangeError("harness.trained", "must not be empty");
  }
}

harness::Setup RunConfig::setup() const {
  harness::Setup s;
  s.world = world;
  s.world.seed = seed;
  s.gains = gains;
  s.harness = harness;
  s.features = features;
  s.features.d_max = world.d_max;
  s.seed = seed;
  return s;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return serialize(*this) == serialize(o);
}

RunConfig parseConfigText(const std::string& text) {
  RunConfig cfg;
  bool blank = true;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
  }
  if (blank) return cfg;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigParseError("config must be a JSON object");
  Reader r(root);
  describe(cfg, r);
  r.finish();
  cfg.validate();
  return cfg;
}

RunConfig parseConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigFileError("config file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfigText(ss.str());
}

std::string serialize(const RunConfig& cfg) {
  Writer w;
  describe(const_cast<RunConfig&>(cfg), w);
  return w.root.dump(2) + "\n";
}

std::string configHash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a(serialize(cfg)));
  return buf;
}

}  // namespace dtactive::config
