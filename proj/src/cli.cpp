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

#include "dtactive/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dtactive/dexterity.hpp"
#include "dtactive/errors.hpp"
#include "dtactive/rng.hpp"

namespace dtactive::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.txt";

void writeFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string readFile(const fs::path& path, const char* what) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(std::string(what) + " not found: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

std::vector<std::string> allObjects(const config::RunConfig& cfg) {
  std::vector<std::string> ids = cfg.harness.trained;
  ids.insert(ids.end(), cfg.harness.novel.begin(), cfg.harness.novel.end());
  return ids;
}

void writeReport(const config::RunConfig& cfg, const std::string& stem,
                 const harness::Report& r) {
  const fs::path dir = cfg.paths.report_dir;
  writeFile(dir / (stem + ".txt"), harness::reportText(r, provenance(cfg)));
  writeFile(dir / (stem + ".json"), harness::reportJson(r, provenance(cfg)));
}

Polygon regularPolygon(int n, double radius) {
  Polygon p;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    p.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return p;
}

void dexterityReport(std::ostream& out) {
  using namespace dexterity;
  const GraspLoad load{10.0, 0.8};
  const CornerGeometry corner;
  out << "[dexterity]\n"
      << "min_radius_roller_r20_mm: " << fmt(minRadiusRoller(20.0)) << "\n"
      << "min_radius_roller_mm: " << fmt(minRadiusRoller(corner.corner_radius))
      << "\n"
      << "min_radius_flat_corner_mm: " << fmt(minRadiusFlatCorner(corner))
      << "\n";
  const double a = 5.0;
  const auto disk = antiTorsion(
      ContactRegion::aboutCentroid(regularPolygon(720, a)), load);
  const auto square = antiTorsion(
      ContactRegion::aboutCentroid(
          Polygon{{-a, -a}, {a, -a}, {a, a}, {-a, a}}), load);
  out << "disk_torque_nmm: " << fmt(disk.torque, 4) << "\n"
      << "disk_torque_analytic_nmm: " << fmt(load.friction_coefficient *
                                              load.normal_force * a, 4)
      << "\n"
      << "square_torque_nmm: " << fmt(square.torque, 4) << "\n"
      << "lifting_force_equal_radii_n: "
      << fmt(liftingForce(load.normal_force, load.friction_coefficient,
                          corner.corner_radius, corner.corner_radius), 4)
      << "\n"
      << "lifting_force_r5_n: "
      << fmt(liftingForce(load.normal_force, load.friction_coefficient,
                          corner.corner_radius, 5.0), 4)
      << "\n";
}

}  // namespace

std::string provenance(const config::RunConfig& cfg) {
  config::RunConfig c = cfg;
  c.paths = config::Paths{};
  return "config_hash=" + config::configHash(c) +
         " seed=" + std::to_string(cfg.seed);
}

learning::TrainConfig trainConfigFor(const config::RunConfig& cfg,
                                     learning::Role role) {
  learning::TrainConfig tc = cfg.training;
  tc.seed = deriveSeed(cfg.seed, 0x7a1,
                       role == learning::Role::kRectifier ? 1 : 2);
  return tc;
}

std::vector<harness::Trajectory> collectStage(const config::RunConfig& cfg,
                                              bool dump_depth,
                                              std::ostream& out) {
  const harness::Setup setup = cfg.setup();
  const fs::path data = cfg.paths.data_dir;
  const std::string prov = provenance(cfg);
  std::map<std::string, int> dumped;  // rollouts seen per object
  harness::FrameSink sink;
  if (dump_depth) {
    // One frame per second of each rollout.
    sink = [&](const harness::Trajectory& t, std::size_t i,
               const world::DepthMap& l, const world::DepthMap& r) {
      if (i == 0) ++dumped[t.object_id];
      if (i % 20 != 0) return;
      char name[96];
      std::snprintf(name, sizeof(name), "%s_%d_%05zu", t.object_id.c_str(),
                    dumped[t.object_id] - 1, i);
      writeFile(data / "depth" / (std::string(name) + "_L.pgm"), world::encodePgm(l, prov));
      writeFile(data / "depth" / (std::string(name) + "_R.pgm"), world::encodePgm(r, prov));
    };
  }
  std::vector<harness::Trajectory> trajs = harness::collect(setup, sink);

  std::string manifest = "# dtactive dataset v1\n# " + prov + "\n";
  std::map<std::string, int> count;
  std::size_t frames = 0;
  for (const harness::Trajectory& t : trajs) {
    const std::string stem = t.object_id + "_" + std::to_string(count[t.object_id]++);
    const auto files = harness::encodeTrajectory(t, stem + ".bin", prov);
    writeFile(data / (stem + ".csv"), files.csv);
    writeFile(data / (stem + ".bin"), files.features);
    manifest += stem + ".csv " + stem + ".bin\n";
    frames += t.frames.size();
    out << "collect " << t.object_id << " " << t.profile
        << " frames=" << t.frames.size() << (t.failed ? " failed" : "") << "\n";
  }
  writeFile(data / kManifest, manifest);
  out << "collected " << trajs.size() << " trajectories, " << frames
      << " frames -> " << data.string() << "\n";
  return trajs;
}

std::vector<harness::Trajectory> loadDataset(const config::RunConfig& cfg) {
  const fs::path data = cfg.paths.data_dir;
  const fs::path manifest = data / kManifest;
  if (!fs::exists(manifest)) {
    throw DatasetError("dataset not found: " + manifest.string());
  }
  std::istringstream in(readFile(manifest, "dataset"));
  std::vector<harness::Trajectory> trajs;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string csv, bin;
    if (!(ls >> csv >> bin)) throw DatasetError("bad manifest line: " + line);
    trajs.push_back(harness::decodeTrajectory(
        readFile(data / csv, "trajectory"), readFile(data / bin, "trajectory"),
        cfg.setup().features));
  }
  if (trajs.empty()) throw DatasetError("dataset is empty: " + manifest.string());
  return trajs;
}

Models trainStage(const config::RunConfig& cfg,
                  const std::vector<harness::Trajectory>& data,
                  std::ostream& out) {
  const harness::Setup setup = cfg.setup();
  const harness::Split sp = harness::split(data, setup.harness, cfg.seed);
  const std::string prov = provenance(cfg);
  const fs::path models = cfg.paths.model_dir;
  std::string log = "# dtactive training\n# " + prov + "\n";
  Models result;
  for (learning::Role role :
       {learning::Role::kRectifier, learning::Role::kPolicy}) {
    const auto samples = harness::samples(sp.train, role, setup.features);
    const auto r = learning::trainDetailed(samples, trainConfigFor(cfg, role),
                                           role);
    const std::string name = learning::roleName(role);
    writeFile(models / (name + ".model"), learning::writeCheckpoint(r.model, prov));
    log += "\n[train " + name + "]\nsamples: " + std::to_string(r.samples_used) +
           "\ninitial_loss: " + fmt(r.initial_loss, 6) +
           "\nfinal_loss: " + fmt(r.epoch_loss.back(), 6) + "\nepoch_loss:";
    for (double l : r.epoch_loss) log += " " + fmt(l, 6);
    log += "\n";
    out << "train " << name << " samples=" << r.samples_used
        << " loss " << fmt(r.initial_loss, 5) << " -> "
        << fmt(r.epoch_loss.back(), 5) << "\n";
    (role == learning::Role::kRectifier ? result.rectifier : result.policy) =
        r.model;
  }
  writeFile(fs::path(cfg.paths.report_dir) / "train.txt", log);
  return result;
}

Models loadModels(const config::RunConfig& cfg) {
  const fs::path dir = cfg.paths.model_dir;
  Models m;
  m.rectifier = learning::readCheckpoint(readFile(dir / "N.model", "model"));
  m.policy = learning::readCheckpoint(readFile(dir / "pi.model", "model"));
  return m;
}

std::vector<harness::OfflineEntry> evalOfflineStage(
    const config::RunConfig& cfg, const std::vector<harness::Trajectory>& data,
    const learning::ModelParams& rectifier, std::ostream& out) {
  const harness::Setup setup = cfg.setup();
  const harness::Split sp = harness::split(data, setup.harness, cfg.seed);
  harness::Report report;
  report.offline = harness::evalOffline(rectifier, sp.test, setup);
  writeReport(cfg, "offline", report);
  int wins = 0, trained = 0;
  double novel_sum = 0.0;
  int novel = 0;
  for (const auto& e : report.offline) {
    out << "offline " << e.object_id << " raw_deg=" << fmt(e.raw_deg)
        << " rectified_deg=" << fmt(e.rectified_deg)
        << " reduction_deg=" << fmt(e.reduction()) << (e.failed ? " failed" : "")
        << "\n";
    if (e.novel) {
      novel_sum += e.reduction();
      ++novel;
    } else {
      ++trained;
      if (!e.failed && e.reduction() > 0.0) ++wins;
    }
  }
  out << "offline reduced " << wins << "/" << trained << " trained";
  if (novel) out << ", novel mean reduction_deg=" << fmt(novel_sum / novel);
  out << "\n";
  return report.offline;
}

std::vector<harness::OnlineResult> evalOnlineStage(
    const config::RunConfig& cfg, const std::vector<std::string>& objects,
    const std::vector<harness::Mode>& modes, const Models* models,
    std::ostream& out) {
  const harness::Setup setup = cfg.setup();
  const std::string prov = provenance(cfg);
  const fs::path dir = fs::path(cfg.paths.report_dir) / "online";
  harness::Report report;
  for (const std::string& id : objects) {
    const world::ObjectShape& obj = world::libraryObject(id);
    for (harness::Mode mode : modes) {
      const bool ours = mode == harness::Mode::kOurs;
      if (ours && !models) throw LearningError("mode ours needs trained models");
      harness::OnlineResult r = harness::evalOnline(
          obj, mode, ours ? &models->rectifier : nullptr,
          ours ? &models->policy : nullptr, setup);
      const std::string stem = id + "_" + harness::modeName(mode);
      const auto files = harness::encodeTrajectory(r.trajectory, stem + ".bin", prov);
      writeFile(dir / (stem + ".csv"), files.csv);
      writeFile(dir / (stem + ".bin"), files.features);
      out << "online " << id << " " << harness::modeName(mode)
          << " rmse_deg=" << fmt(r.rmse_deg) << " rms_jerk=" << fmt(r.rms_jerk)
          << (r.failed ? " failed" : "") << "\n";
      r.trajectory.frames.clear();
      report.online.push_back(std::move(r));
    }
  }
  writeReport(cfg, "online", report);
  return report.online;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Active-surface tactile gripper simulator", "dtactive"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> objects;
  std::vector<std::string> mode_names;
  std::optional<double> amplitude, period;
  bool dump_depth = false;
  std::string out_dir;

  const auto objectCheck = CLI::Validator(
      [](std::string& id) -> std::string {
        try {
          world::libraryObject(id);
        } catch (const DomainError&) {
          return "unknown object id " + id;
        }
        return {};
      },
      "OBJECT");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "run seed");
  app.add_option("--object", objects, "object id (repeatable)")->check(objectCheck);
  app.add_option("--mode", mode_names, "open-loop | ours (repeatable)")
      ->check(CLI::IsMember({"open-loop", "ours"}));
  app.add_option("--amplitude", amplitude, "online amplitude, deg")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--period", period, "online period, s")->check(CLI::PositiveNumber);
  app.add_flag("--dump-depth", dump_depth, "write depth maps as PGM");
  app.add_option("--out", out_dir, "output root (data/, models/, reports/)");

  const char* names[][2] = {
      {"dexterity", "print the grasp-dexterity closed forms"},
      {"collect", "collect the constant-command dataset"},
      {"train", "train the rectification and policy models"},
      {"eval-offline", "replay held-out trajectories"},
      {"eval-online", "track a sinusoidal orientation trajectory"},
      {"run", "collect, train and evaluate"},
      {"demo", "reduced end-to-end run"},
  };
  for (const auto& n : names) app.add_subcommand(n[0], n[1]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n" << app.help();
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    if (cmd == "dexterity") {
      dexterityReport(out);
      return 0;
    }
    config::RunConfig cfg = config_path.empty()
                                ? config::RunConfig{}
                                : config::parseConfigFile(config_path);
    if (seed) cfg.seed = *seed;
    if (amplitude) cfg.harness.amplitude = *amplitude;
    if (period) cfg.harness.period = *period;
    if (!out_dir.empty()) {
      cfg.paths.data_dir = (fs::path(out_dir) / "data").string();
      cfg.paths.model_dir = (fs::path(out_dir) / "models").string();
      cfg.paths.report_dir = (fs::path(out_dir) / "reports").string();
    }
    std::vector<harness::Mode> modes;
    for (const auto& m : mode_names) modes.push_back(harness::parseMode(m));
    if (modes.empty()) modes = {harness::Mode::kOpenLoop, harness::Mode::kOurs};

    if (cmd == "demo") {
      // Smaller training budget, fewer online objects, one period.
      cfg.training.epochs = std::min(cfg.training.epochs, 20);
      cfg.harness.periods = 1;
      if (objects.empty()) objects = {"A1", "B1", "C2", "N1"};
    }
    cfg.validate();
    if (objects.empty()) objects = allObjects(cfg);
    out << provenance(cfg) << "\n";

    if (cmd == "collect") {
      collectStage(cfg, dump_depth, out);
    } else if (cmd == "train") {
      trainStage(cfg, loadDataset(cfg), out);
    } else if (cmd == "eval-offline") {
      const auto data = loadDataset(cfg);
      evalOfflineStage(cfg, data, loadModels(cfg).rectifier, out);
    } else if (cmd == "eval-online") {
      const bool ours = std::count(modes.begin(), modes.end(), harness::Mode::kOurs);
      std::optional<Models> models;
      if (ours) models = loadModels(cfg);
      evalOnlineStage(cfg, objects, modes, models ? &*models : nullptr, out);
    } else {  // run, demo
      const auto data = collectStage(cfg, dump_depth, out);
      const Models models = trainStage(cfg, data, out);
      evalOfflineStage(cfg, data, models.rectifier, out);
      evalOnlineStage(cfg, objects, modes, &models, out);
    }
    return 0;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << "\n";
    return 1;
  }
}

}  // namespace dtactive::cli
