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

// Small dense regressors mapping a pair of tactile depth maps and one angular
// velocity to a rolling ratio. The same architecture serves as the
// rectification model (scalar input: commanded angular velocity, output:
// estimated k) and as the policy (scalar input: desired angular velocity,
// output: u).

#ifndef DTACTIVE_LEARNING_HPP_
#define DTACTIVE_LEARNING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dtactive/world.hpp"

namespace dtactive::learning {

enum class Role { kRectifier, kPolicy };

const char* roleName(Role role);  // "N" / "pi"
Role parseRole(const std::string& name);

struct FeatureConfig {
  int pool_cols = 16;
  int pool_rows = 12;
  double d_max = 1.5;      // mm, depth normalization
  double omega_max = 1.0;  // rad/s, scalar normalization

  int length() const { return 2 * pool_cols * pool_rows + 1; }
};

struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  // Pooled depth part, without the scalar channel.
  std::span<const double> pooled() const {
    return {values.data(), values.size() - 1};
  }
  double scalar() const { return values.back(); }
};

// Average-pools each map onto a fixed pool_cols x pool_rows grid, divides by
// d_max, and appends the scalar channel as in assemble(). Pixels straddling
// a cell boundary are split by covered area, so the grid is mirror-exact. Throws DomainError on mismatched or
// too-small maps.
FeatureVector featurize(const world::DepthMap& left,
                        const world::DepthMap& right, double omega,
                        const FeatureConfig& cfg);

// Pooled part only, for logging.
std::vector<double> poolMaps(const world::DepthMap& left,
                             const world::DepthMap& right,
                             const FeatureConfig& cfg);

// A negative omega is folded onto the positive side by mirroring the pooled
// columns (reverse rotation is the mirror image of forward rotation), so
// the scalar channel is |omega| / omega_max.
FeatureVector assemble(std::span<const double> pooled, double omega,
                       const FeatureConfig& cfg);

enum class Activation { kRelu, kIdentity };
enum class OutputHead { kScaledSigmoid, kIdentity };

inline constexpr double kOutputScale = 1.2;

struct Layer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> biases;   // out

  bool operator==(const Layer&) const = default;
};

class ModelParams {
 public:
  ModelParams() = default;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization.
  static ModelParams initialize(Role role, std::vector<int> dims,
                                std::uint64_t seed,
                                Activation hidden = Activation::kRelu,
                                OutputHead head = OutputHead::kScaledSigmoid);
  static ModelParams zeros(Role role, std::vector<int> dims);

  Role role() const { return role_; }
  Activation hidden() const { return hidden_; }
  OutputHead head() const { return head_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<int> dims() const;
  int inputSize() const { return layers_.empty() ? 0 : layers_.front().in; }

  std::size_t parameterCount() const;
  double parameter(std::size_t i) const;
  double& parameter(std::size_t i);

  bool operator==(const ModelParams&) const = default;

 private:
  friend ModelParams readCheckpoint(const std::string& text);
  Role role_ = Role::kRectifier;
  Activation hidden_ = Activation::kRelu;
  OutputHead head_ = OutputHead::kScaledSigmoid;
  std::vector<Layer> layers_;
};

std::vector<int> defaultDims(const FeatureConfig& cfg);

// Prediction in (0, 1.2] for the scaled-sigmoid head. Throws LearningError on
// non-finite intermediates, DomainError on a length mismatch.
double forward(const ModelParams& model, std::span<const double> features);
inline double forward(const ModelParams& model, const FeatureVector& f) {
  return forward(model, std::span<const double>(f.values));
}

struct Sample {
  FeatureVector features;
  double omega_command = 0.0;  // rad/s, used for the label-validity filter
  double label = 0.0;          // omega_obj / omega_obj,c
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;  // flat, ModelParams::parameter order
};

// Mean squared error and its exact gradient. Throws on an empty batch.
LossAndGrad lossAndGrad(const ModelParams& model,
                        std::span<const Sample* const> batch);
LossAndGrad lossAndGrad(const ModelParams& model,
                        std::span<const Sample> batch);
double loss(const ModelParams& model, std::span<const Sample> batch);

// Momentum SGD, or Adam with beta1 = momentum and beta2 = 0.999.
enum class Optimizer { kMomentum, kAdam };
const char* optimizerName(Optimizer o);  // "momentum" / "adam"
Optimizer parseOptimizer(const std::string& name);

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 1e-3;
  // Linear schedule: epoch e uses learning_rate * (1 - lr_decay * e / epochs).
  double lr_decay = 1.0;
  int epochs = 60;
  int batch_size = 64;
  double momentum = 0.9;
  std::uint64_t seed = 1;
  double omega_floor = 0.02;  // rad/s
  std::vector<int> hidden = {128, 64};
  // Train on per-feature z-scores; the returned model takes raw features.
  bool standardize = true;

  void validate() const;
};

struct TrainResult {
  ModelParams model;
  std::vector<double> epoch_loss;  // mean training loss after each epoch
  double initial_loss = 0.0;
  std::size_t samples_used = 0;
};

TrainResult trainDetailed(std::span<const Sample> dataset,
                          const TrainConfig& cfg, Role role);
ModelParams train(std::span<const Sample> dataset, const TrainConfig& cfg,
                  Role role);

// Largest relative error between analytic and central-difference gradients
// of the single-sample loss. Parameters whose perturbation flips a rectifier
// are skipped (the loss is not differentiable there).
double gradCheck(const ModelParams& model, const Sample& sample, double eps);

// Text checkpoint; weights use shortest round-trip decimal form.
std::string writeCheckpoint(const ModelParams& model,
                            const std::string& provenance = {});
ModelParams readCheckpoint(const std::string& text);

}  // namespace dtactive::learning

#endif  // DTACTIVE_LEARNING_HPP_
