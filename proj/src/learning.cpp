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

#include "dtactive/learning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "dtactive/errors.hpp"
#include "dtactive/rng.hpp"

namespace dtactive::learning {

const char* roleName(Role role) {
  return role == Role::kRectifier ? "N" : "pi";
}

Role parseRole(const std::string& name) {
  if (name == "N") return Role::kRectifier;
  if (name == "pi") return Role::kPolicy;
  throw LearningError("unknown model role: " + name);
}

// ---------------------------------------------------------------------------
// Features

namespace {

struct Share {
  int cell;
  double weight;  // fraction of the pixel inside the cell
};

// Pixel i of n covers [i, i+1); cell k of m covers [k n/m, (k+1) n/m).
// Exact fractions keep the grid mirror-symmetric for any n.
std::vector<std::vector<Share>> coverage(int n, int m) {
  std::vector<std::vector<Share>> out(n);
  for (int i = 0; i < n; ++i) {
    // Work in units of 1/m pixel so the boundaries are integers.
    const long lo = static_cast<long>(i) * m, hi = lo + m;
    for (long k = lo / n; k < m && k * n < hi; ++k) {
      const long a = std::max(lo, k * n), b = std::min(hi, (k + 1) * n);
      if (b > a) out[i].push_back({static_cast<int>(k), double(b - a) / m});
    }
  }
  return out;
}

}  // namespace

std::vector<double> poolMaps(const world::DepthMap& left,
                             const world::DepthMap& right,
                             const FeatureConfig& cfg) {
  if (left.width != right.width || left.height != right.height) {
    throw DomainError("depth maps differ in size");
  }
  if (left.width < cfg.pool_cols || left.height < cfg.pool_rows) {
    throw DomainError("depth map smaller than the pooling grid");
  }
  const int cells = cfg.pool_cols * cfg.pool_rows;
  const auto cx = coverage(left.width, cfg.pool_cols);
  const auto cy = coverage(left.height, cfg.pool_rows);
  const double area = static_cast<double>(left.width) / cfg.pool_cols *
                      left.height / cfg.pool_rows;
  std::vector<double> out(2 * cells, 0.0);
  int side = 0;
  for (const world::DepthMap* map : {&left, &right}) {
    double* block = out.data() + side * cells;
    for (int i = 0; i < left.height; ++i) {
      for (int j = 0; j < left.width; ++j) {
        const double v = map->at(i, j);
        if (v == 0.0) continue;
        for (const Share& r : cy[i]) {
          for (const Share& c : cx[j]) {
            block[r.cell * cfg.pool_cols + c.cell] += r.weight * c.weight * v;
          }
        }
      }
    }
    ++side;
  }
  for (double& v : out) v /= area * cfg.d_max;
  return out;
}

FeatureVector assemble(std::span<const double> pooled, double omega,
                       const FeatureConfig& cfg) {
  if (static_cast<int>(pooled.size()) != cfg.length() - 1) {
    throw DomainError("pooled feature length mismatch");
  }
  FeatureVector f;
  f.values.reserve(pooled.size() + 1);
  f.values.assign(pooled.begin(), pooled.end());
  if (omega < 0.0) {
    // Reverse rotation is the x-mirror of forward rotation: flip columns.
    const int cols = cfg.pool_cols;
    for (std::size_t row = 0; row < f.values.size(); row += cols) {
      std::reverse(f.values.begin() + row, f.values.begin() + row + cols);
    }
    omega = -omega;
  }
  f.values.push_back(omega / cfg.omega_max);
  return f;
}

FeatureVector featurize(const world::DepthMap& left,
                        const world::DepthMap& right, double omega,
                        const FeatureConfig& cfg) {
  return assemble(poolMaps(left, right, cfg), omega, cfg);
}

// ---------------------------------------------------------------------------
// Parameters

std::vector<int> defaultDims(const FeatureConfig& cfg) {
  return {cfg.length(), 128, 64, 1};
}

ModelParams ModelParams::zeros(Role role, std::vector<int> dims) {
  if (dims.size() < 2 || dims.back() != 1) {
    throw DomainError("model dims must end in a single output");
  }
  ModelParams m;
  m.role_ = role;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] < 1 || dims[l + 1] < 1) throw DomainError("empty layer");
    Layer layer;
    layer.in = dims[l];
    layer.out = dims[l + 1];
    layer.weights.assign(static_cast<std::size_t>(layer.in) * layer.out, 0.0);
    layer.biases.assign(layer.out, 0.0);
    m.layers_.push_back(std::move(layer));
  }
  return m;
}

ModelParams ModelParams::initialize(Role role, std::vector<int> dims,
                                    std::uint64_t seed, Activation hidden,
                                    OutputHead head) {
  ModelParams m = zeros(role, std::move(dims));
  m.hidden_ = hidden;
  m.head_ = head;
  std::mt19937_64 rng(deriveSeed(seed, 0x1a7e5));
  for (Layer& layer : m.layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : layer.weights) w = dist(rng);
    for (double& b : layer.biases) b = dist(rng);
  }
  return m;
}

std::vector<int> ModelParams::dims() const {
  std::vector<int> d;
  if (layers_.empty()) return d;
  d.push_back(layers_.front().in);
  for (const Layer& l : layers_) d.push_back(l.out);
  return d;
}

std::size_t ModelParams::parameterCount() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

double ModelParams::parameter(std::size_t i) const {
  return const_cast<ModelParams*>(this)->parameter(i);
}

double& ModelParams::parameter(std::size_t i) {
  for (Layer& l : layers_) {
    if (i < l.weights.size()) return l.weights[i];
    i -= l.weights.size();
    if (i < l.biases.size()) return l.biases[i];
    i -= l.biases.size();
  }
  throw DomainError("parameter index out of range");
}

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Scratch buffers for one pass; reused across samples.
struct Tape {
  std::vector<std::vector<double>> pre;   // pre-activations per layer
  std::vector<std::vector<double>> post;  // activations per layer
  std::vector<int> nonzero;               // nonzero input indices
  double output = 0.0;
  double head_grad = 0.0;  // d output / d last pre-activation
};

void runForward(const ModelParams& m, std::span<const double> x, Tape& tape) {
  const auto& layers = m.layers();
  if (static_cast<int>(x.size()) != m.inputSize()) {
    throw DomainError("feature length " + std::to_string(x.size()) +
                      " does not match model input " +
                      std::to_string(m.inputSize()));
  }
  tape.pre.resize(layers.size());
  tape.post.resize(layers.size());
  tape.nonzero.clear();
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    if (x[i] != 0.0) tape.nonzero.push_back(i);
  }
  std::span<const double> in = x;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    auto& z = tape.pre[l];
    z.assign(layer.biases.begin(), layer.biases.end());
    if (l == 0) {
      for (int o = 0; o < layer.out; ++o) {
        const double* row = &layer.weights[static_cast<std::size_t>(o) * layer.in];
        double s = 0.0;
        for (int i : tape.nonzero) s += row[i] * in[i];
        z[o] += s;
      }
    } else {
      for (int o = 0; o < layer.out; ++o) {
        const double* row = &layer.weights[static_cast<std::size_t>(o) * layer.in];
        double s = 0.0;
        for (int i = 0; i < layer.in; ++i) s += row[i] * in[i];
        z[o] += s;
      }
    }
    auto& a = tape.post[l];
    const bool last = l + 1 == layers.size();
    if (last) {
      a = z;
    } else if (m.hidden() == Activation::kRelu) {
      a.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
    } else {
      a = z;
    }
    in = a;
  }
  const double z_out = tape.pre.back()[0];
  if (m.head() == OutputHead::kScaledSigmoid) {
    const double zc = std::max(z_out, -700.0);
    const double s = sigmoid(zc);
    tape.output = kOutputScale * s;
    tape.head_grad = z_out < -700.0 ? 0.0 : kOutputScale * s * (1.0 - s);
  } else {
    tape.output = z_out;
    tape.head_grad = 1.0;
  }
  if (!std::isfinite(tape.output)) {
    throw LearningError("non-finite model output");
  }
}

// Accumulates d(scale * output) / d(params) into `grad`.
void runBackward(const ModelParams& m, std::span<const double> x,
                 const Tape& tape, double scale, std::vector<double>& grad,
                 std::vector<double>& delta, std::vector<double>& next) {
  const auto& layers = m.layers();
  // Flat offsets of each layer's weights.
  std::size_t offset = m.parameterCount();
  delta.assign(1, scale * tape.head_grad);
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Layer& layer = layers[l];
    offset -= layer.weights.size() + layer.biases.size();
    double* gw = &grad[offset];
    double* gb = gw + layer.weights.size();
    std::span<const double> in =
        l == 0 ? x : std::span<const double>(tape.post[l - 1]);
    for (int o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* row = gw + static_cast<std::size_t>(o) * layer.in;
      if (l == 0) {
        for (int i : tape.nonzero) row[i] += d * in[i];
      } else {
        for (int i = 0; i < layer.in; ++i) row[i] += d * in[i];
      }
    }
    if (l == 0) break;
    next.assign(layer.in, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = &layer.weights[static_cast<std::size_t>(o) * layer.in];
      for (int i = 0; i < layer.in; ++i) next[i] += row[i] * d;
    }
    if (m.hidden() == Activation::kRelu) {
      const auto& z = tape.pre[l - 1];
      for (int i = 0; i < layer.in; ++i) {
        if (!(z[i] > 0.0)) next[i] = 0.0;
      }
    }
    delta.swap(next);
  }
}

std::vector<char> activationPattern(const Tape& tape) {
  std::vector<char> p;
  for (std::size_t l = 0; l + 1 < tape.pre.size(); ++l) {
    for (double z : tape.pre[l]) p.push_back(z > 0.0);
  }
  return p;
}

}  // namespace

double forward(const ModelParams& model, std::span<const double> features) {
  Tape tape;
  runForward(model, features, tape);
  return tape.output;
}

LossAndGrad lossAndGrad(const ModelParams& model,
                        std::span<const Sample* const> batch) {
  if (batch.empty()) throw LearningError("empty batch");
  LossAndGrad out;
  out.grad.assign(model.parameterCount(), 0.0);
  Tape tape;
  std::vector<double> delta, next;
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const Sample* s : batch) {
    const auto x = std::span<const double>(s->features.values);
    runForward(model, x, tape);
    const double err = tape.output - s->label;
    out.loss += err * err * inv;
    runBackward(model, x, tape, 2.0 * err * inv, out.grad, delta, next);
  }
  return out;
}

LossAndGrad lossAndGrad(const ModelParams& model,
                        std::span<const Sample> batch) {
  std::vector<const Sample*> ptrs;
  ptrs.reserve(batch.size());
  for (const Sample& s : batch) ptrs.push_back(&s);
  return lossAndGrad(model, std::span<const Sample* const>(ptrs));
}

double loss(const ModelParams& model, std::span<const Sample> batch) {
  if (batch.empty()) throw LearningError("empty batch");
  Tape tape;
  double total = 0.0;
  for (const Sample& s : batch) {
    runForward(model, s.features.values, tape);
    const double err = tape.output - s.label;
    total += err * err;
  }
  return total / static_cast<double>(batch.size());
}

// ---------------------------------------------------------------------------
// Training

const char* optimizerName(Optimizer o) {
  return o == Optimizer::kAdam ? "adam" : "momentum";
}

Optimizer parseOptimizer(const std::string& name) {
  if (name == "momentum") return Optimizer::kMomentum;
  if (name == "adam") return Optimizer::kAdam;
  throw DomainError("unknown optimizer: " + name);
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be > 0");
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw DomainError("momentum must be in [0, 1)");
  }
  if (!(omega_floor >= 0.0)) throw DomainError("omega_floor must be >= 0");
  if (!(lr_decay >= 0.0 && lr_decay <= 1.0)) {
    throw DomainError("lr_decay must be in [0, 1]");
  }
}

namespace {
// Keeps near-constant pixels from being blown up by the z-score.
constexpr double kStdFloor = 1e-3;
}  // namespace

TrainResult trainDetailed(std::span<const Sample> dataset,
                          const TrainConfig& cfg, Role role) {
  cfg.validate();
  std::vector<const Sample*> usable;
  for (const Sample& s : dataset) {
    if (std::abs(s.omega_command) >= cfg.omega_floor &&
        std::isfinite(s.label)) {
      usable.push_back(&s);
    }
  }
  if (usable.empty()) {
    throw LearningError("no training samples above the omega floor");
  }
  const std::size_t n_in = usable.front()->features.size();
  for (const Sample* p : usable) {
    if (p->features.size() != n_in) {
      throw DomainError("training samples differ in feature length");
    }
  }

  // Per-feature z-scores, folded back into the first layer after training.
  std::vector<double> mean(n_in, 0.0), inv_sd(n_in, 1.0);
  std::vector<Sample> scaled;
  if (cfg.standardize) {
    std::vector<double> sq(n_in, 0.0);
    for (const Sample* p : usable) {
      for (std::size_t j = 0; j < n_in; ++j) mean[j] += p->features.values[j];
    }
    for (double& m : mean) m /= static_cast<double>(usable.size());
    for (const Sample* p : usable) {
      for (std::size_t j = 0; j < n_in; ++j) {
        const double d = p->features.values[j] - mean[j];
        sq[j] += d * d;
      }
    }
    for (std::size_t j = 0; j < n_in; ++j) {
      inv_sd[j] = 1.0 / (std::sqrt(sq[j] / usable.size()) + kStdFloor);
    }
    scaled.reserve(usable.size());
    for (const Sample* p : usable) {
      Sample z = *p;
      for (std::size_t j = 0; j < n_in; ++j) {
        z.features.values[j] = (z.features.values[j] - mean[j]) * inv_sd[j];
      }
      scaled.push_back(std::move(z));
    }
    for (std::size_t i = 0; i < usable.size(); ++i) usable[i] = &scaled[i];
  }

  std::vector<int> dims{static_cast<int>(n_in)};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(1);

  TrainResult result;
  result.samples_used = usable.size();
  result.model = ModelParams::initialize(role, dims, cfg.seed);
  ModelParams& model = result.model;
  auto datasetLoss = [&] {
    return lossAndGrad(model, std::span<const Sample* const>(usable)).loss;
  };
  result.initial_loss = datasetLoss();

  const std::size_t n_params = model.parameterCount();
  std::vector<double> velocity(n_params, 0.0);
  std::vector<double> second(
      cfg.optimizer == Optimizer::kAdam ? n_params : 0, 0.0);
  constexpr double kBeta2 = 0.999;
  constexpr double kAdamEps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;
  std::vector<const Sample*> order = usable;
  std::vector<const Sample*> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr =
        cfg.learning_rate * (1.0 - cfg.lr_decay * epoch / cfg.epochs);
    std::mt19937_64 rng(deriveSeed(cfg.seed, 0xe90c, epoch));
    order = usable;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.assign(order.begin() + start, order.begin() + end);
      const LossAndGrad lg =
          lossAndGrad(model, std::span<const Sample* const>(batch));
      if (cfg.optimizer == Optimizer::kAdam) {
        beta1_t *= cfg.momentum;
        beta2_t *= kBeta2;
        const double c1 = 1.0 - beta1_t, c2 = 1.0 - beta2_t;
        for (std::size_t i = 0; i < n_params; ++i) {
          const double g = lg.grad[i];
          velocity[i] = cfg.momentum * velocity[i] + (1.0 - cfg.momentum) * g;
          second[i] = kBeta2 * second[i] + (1.0 - kBeta2) * g * g;
          model.parameter(i) -=
              lr * (velocity[i] / c1) / (std::sqrt(second[i] / c2) + kAdamEps);
        }
      } else {
        for (std::size_t i = 0; i < n_params; ++i) {
          velocity[i] = cfg.momentum * velocity[i] - lr * lg.grad[i];
          model.parameter(i) += velocity[i];
        }
      }
    }
    result.epoch_loss.push_back(datasetLoss());
  }
  if (cfg.standardize) {
    // w.((x - m) * k) + b  ==  (w * k).x + (b - sum w * k * m)
    const int out = dims[1];
    const std::size_t bias0 = static_cast<std::size_t>(out) * n_in;
    for (int i = 0; i < out; ++i) {
      double shift = 0.0;
      for (std::size_t j = 0; j < n_in; ++j) {
        double& w = model.parameter(i * n_in + j);
        w *= inv_sd[j];
        shift += w * mean[j];
      }
      model.parameter(bias0 + i) -= shift;
    }
  }
  return result;
}

ModelParams train(std::span<const Sample> dataset, const TrainConfig& cfg,
                  Role role) {
  return trainDetailed(dataset, cfg, role).model;
}

// ---------------------------------------------------------------------------
// Gradient check

double gradCheck(const ModelParams& model, const Sample& sample, double eps) {
  if (!(eps > 0.0)) throw DomainError("finite-difference step must be > 0");
  // Differences below this are treated as rounding.
  constexpr double kAbsTol = 1e-8;
  const Sample* one[] = {&sample};
  const LossAndGrad analytic =
      lossAndGrad(model, std::span<const Sample* const>(one));
  ModelParams probe = model;
  Tape tape;
  const auto x = std::span<const double>(sample.features.values);
  runForward(probe, x, tape);
  const std::vector<char> base = activationPattern(tape);
  auto evaluate = [&](std::vector<char>& pattern) {
    runForward(probe, x, tape);
    pattern = activationPattern(tape);
    const double err = tape.output - sample.label;
    return err * err;
  };
  double worst = 0.0;
  std::vector<char> plus_pattern, minus_pattern;
  for (std::size_t i = 0; i < probe.parameterCount(); ++i) {
    const double saved = probe.parameter(i);
    probe.parameter(i) = saved + eps;
    const double lp = evaluate(plus_pattern);
    probe.parameter(i) = saved - eps;
    const double lm = evaluate(minus_pattern);
    probe.parameter(i) = saved;
    if (plus_pattern != base || minus_pattern != base) continue;
    const double numeric = (lp - lm) / (2.0 * eps);
    const double a = analytic.grad[i];
    const double rel = std::max(0.0, std::abs(a - numeric) - kAbsTol) /
                       (std::abs(a) + std::abs(numeric) + kAbsTol);
    worst = std::max(worst, rel);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

void appendDouble(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string writeCheckpoint(const ModelParams& model,
                            const std::string& provenance) {
  if (model.hidden() != Activation::kRelu ||
      model.head() != OutputHead::kScaledSigmoid) {
    throw LearningError("only rectifier/scaled-sigmoid models are saved");
  }
  std::string out = "DTACTIVE-MODEL v1 ";
  out += roleName(model.role());
  out += '\n';
  const auto dims = model.dims();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(dims[i]);
  }
  out += '\n';
  for (const Layer& layer : model.layers()) {
    for (int o = 0; o < layer.out; ++o) {
      for (int i = 0; i < layer.in; ++i) {
        if (i) out += ' ';
        appendDouble(out, layer.weights[static_cast<std::size_t>(o) * layer.in + i]);
      }
      out += '\n';
    }
    for (int o = 0; o < layer.out; ++o) {
      if (o) out += ' ';
      appendDouble(out, layer.biases[o]);
    }
    out += '\n';
  }
  if (!provenance.empty()) out += "# " + provenance + "\n";
  return out;
}

ModelParams readCheckpoint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw LearningError("empty checkpoint");
  std::istringstream head(line);
  std::string magic, version, role;
  head >> magic >> version >> role;
  if (magic != "DTACTIVE-MODEL" || version != "v1") {
    throw LearningError("not a DTACTIVE-MODEL v1 checkpoint");
  }
  if (!std::getline(in, line)) throw LearningError("missing layer dims");
  std::istringstream dim_line(line);
  std::vector<int> dims;
  for (int d; dim_line >> d;) dims.push_back(d);
  ModelParams m = ModelParams::zeros(parseRole(role), dims);
  std::size_t index = 0;
  const std::size_t total = m.parameterCount();
  std::string token;
  while (index < total && in >> token) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      throw LearningError("bad weight token: " + token);
    }
    m.parameter(index++) = v;
  }
  if (index != total) throw LearningError("checkpoint truncated");
  return m;
}

}  // namespace dtactive::learning
