/*
 * Copyright 2026 The GATN Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GATN_MODEL_H_
#define GATN_MODEL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gatn/corr.h"
#include "gatn/embeddings.h"
#include "gatn/gat_layer.h"
#include "gatn/gcn.h"
#include "gatn/matrix.h"

namespace gatn {

// Architecture hyper-parameters. A head_dim of 0 means "number of labels".
struct ModelConfig {
  bool use_gat = true;
  std::size_t num_subgraphs = 2;  // k
  std::size_t num_heads = 4;      // h
  std::size_t head_dim = 0;       // D_h
  std::vector<std::size_t> gcn_hidden = {1024};
  std::size_t feature_dim = 2048;  // D
  double leaky_slope = 0.2;

  void Validate() const;
  std::size_t ResolvedHeadDim(std::size_t num_labels) const {
    return head_dim == 0 ? num_labels : head_dim;
  }
};

// Same-shaped container for gradients and momentum buffers. Head and
// sub-graph matrices reuse the GatLayerParams layout.
struct GradientBundle {
  std::optional<GatLayerParams> gat;
  std::vector<Matrix> gcn;

  std::vector<Matrix*> Tensors();
  std::vector<const Matrix*> Tensors() const;
};

struct GatnParams {
  std::optional<GatLayerParams> gat;  // absent when the attention layer is off
  std::vector<GcnLayerParams> gcn;
  GradientBundle momentum;

  // Learnable matrices in canonical order: for each sub-graph, each head's
  // wq, wk, wv, then wo; then the GCN weights.
  std::vector<Matrix*> Tensors();
  std::vector<const Matrix*> Tensors() const;
  std::size_t NumScalars() const;

  // A zero bundle shaped like these parameters.
  GradientBundle ZeroGradients() const;
};

GatnParams InitGatnParams(const ModelConfig& config, std::size_t num_labels,
                          std::size_t embed_dim, std::uint64_t seed);

// Checks internal consistency against n labels, embedding dim d and feature
// dim D. Throws kConfig/kShape.
void ValidateGatnParams(const GatnParams& params, std::size_t num_labels,
                        std::size_t embed_dim);
std::size_t FeatureDim(const GatnParams& params);

using Features = std::variant<std::vector<double>, Matrix>;

struct LabeledSample {
  Features features;  // pooled D-vector, or a D x locations feature map
  std::vector<double> targets;  // n entries in {0, 1}

  std::vector<double> Pooled() const;
};

struct Dataset {
  std::size_t num_labels = 0;
  std::size_t feature_dim = 0;
  std::vector<LabeledSample> samples;

  // samples x n matrix of targets.
  Matrix TargetMatrix() const;
};

struct TrainConfig {
  double lr = 0.03;
  double momentum = 0.9;
  double weight_decay = 0.0;
  std::size_t epochs = 50;
  std::size_t batch_size = 16;
  std::uint64_t seed = 42;
  // Optional step schedule: multiply lr by lr_step_gamma every
  // lr_step_epochs epochs (0 disables).
  std::size_t lr_step_epochs = 0;
  double lr_step_gamma = 0.1;

  void Validate() const;
  double LearningRateAt(std::size_t epoch) const;
};

// Per-channel maximum over the location axis.
std::vector<double> GlobalMaxPool(const Matrix& feature_map);

// Raw logits W * x.
std::vector<double> Predict(const Matrix& label_features,
                            std::span<const double> x);

// Sum over labels of the binary cross-entropy, evaluated from logits.
double BceLoss(std::span<const double> logits, std::span<const double> targets);

// Classifier matrix W (n x D) produced by the label branch.
Matrix LabelFeatures(const GatnParams& params, const EmbeddingMatrix& z,
                     const AdjacencyMatrix& a);

struct ForwardResult {
  Matrix logits;  // batch x n
  double loss = 0.0;  // mean over the batch
};

ForwardResult Forward(const GatnParams& params, const EmbeddingMatrix& z,
                      const AdjacencyMatrix& a,
                      std::span<const LabeledSample> batch);

struct LossAndGradients {
  double loss = 0.0;
  GradientBundle grads;
};

// Exact gradient of the mean batch loss. Z and A are held constant.
LossAndGradients Gradients(const GatnParams& params, const EmbeddingMatrix& z,
                           const AdjacencyMatrix& a,
                           std::span<const LabeledSample> batch);

// Central differences of an arbitrary scalar function.
std::vector<double> CentralDifferences(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> theta, double step);

// Central differences of the mean batch loss, one parameter at a time.
GradientBundle FiniteDiffGradients(const GatnParams& params,
                                   const EmbeddingMatrix& z,
                                   const AdjacencyMatrix& a,
                                   std::span<const LabeledSample> batch,
                                   double step);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor). The floor keeps entries
// whose true gradient is ~0 from dominating through rounding noise.
inline constexpr double kRelativeErrorFloor = 1e-6;
double MaxRelativeError(const GradientBundle& a, const GradientBundle& b,
                        double floor = kRelativeErrorFloor);

// v <- momentum * v + (g + weight_decay * theta); theta <- theta - lr * v.
void SgdStep(GatnParams& params, const GradientBundle& grads,
             const TrainConfig& config);

struct TrainResult {
  GatnParams params;
  std::vector<double> loss_history;  // mean training loss seen per epoch
};

// Trains from `init`. Shuffling and batching are seeded by config.seed.
TrainResult TrainFrom(GatnParams init, const TrainConfig& config,
                      const EmbeddingMatrix& z, const AdjacencyMatrix& a,
                      std::span<const LabeledSample> dataset);

// Initializes from `model` with config.seed, then trains.
TrainResult Train(const TrainConfig& config, const ModelConfig& model,
                  const EmbeddingMatrix& z, const AdjacencyMatrix& a,
                  std::span<const LabeledSample> dataset);

}  // namespace gatn

#endif  // GATN_MODEL_H_
