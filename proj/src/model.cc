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

#include "gatn/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gatn/random.h"

namespace gatn {
namespace {

template <typename GatPtr, typename Out>
void CollectGat(GatPtr gat, Out& out) {
  if (!gat) return;
  for (auto& sg : gat->subgraphs) {
    for (auto& head : sg.heads) {
      out.push_back(&head.wq);
      out.push_back(&head.wk);
      out.push_back(&head.wv);
    }
    out.push_back(&sg.wo);
  }
}

// Pooled features as rows of a batch x D matrix; validates every sample.
Matrix StackFeatures(std::span<const LabeledSample> batch,
                     std::size_t feature_dim, std::size_t num_labels) {
  if (batch.empty()) {
    throw Error(ErrorKind::kValidation, "forward: empty batch");
  }
  Matrix x(batch.size(), feature_dim);
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const std::vector<double> pooled = batch[s].Pooled();
    if (pooled.size() != feature_dim) {
      throw Error(ErrorKind::kShape,
                  "sample " + std::to_string(s) + ": feature dim " +
                      std::to_string(pooled.size()) + ", model expects " +
                      std::to_string(feature_dim));
    }
    if (batch[s].targets.size() != num_labels) {
      throw Error(ErrorKind::kShape,
                  "sample " + std::to_string(s) + ": " +
                      std::to_string(batch[s].targets.size()) +
                      " targets, model has " + std::to_string(num_labels) +
                      " labels");
    }
    std::copy(pooled.begin(), pooled.end(), x.row(s).begin());
  }
  CheckFinite(x, "features");
  return x;
}

double MeanLoss(const Matrix& logits, std::span<const LabeledSample> batch) {
  double total = 0.0;
  for (std::size_t s = 0; s < batch.size(); ++s)
    total += BceLoss(logits.row(s), batch[s].targets);
  return total / static_cast<double>(batch.size());
}

// Forward pass that keeps everything the backward pass needs.
struct Tape {
  GatForwardCache gat;
  NormalizeCache normalize;
  Matrix ahat;
  GcnForwardCache gcn;
  Matrix label_features;
};

Matrix LabelBranch(const GatnParams& params, const EmbeddingMatrix& z,
                   const AdjacencyMatrix& a, Tape& tape) {
  if (a.a.rows() != z.num_labels() || a.a.cols() != z.num_labels()) {
    throw Error(ErrorKind::kShape, "adjacency " + a.a.ShapeString() +
                                       " does not match " +
                                       std::to_string(z.num_labels()) +
                                       " labels");
  }
  const Matrix transformed =
      params.gat ? TransformAdjacencyForward(a.a, *params.gat, tape.gat) : a.a;
  tape.ahat = NormalizeAdjacencyForward(transformed, tape.normalize);
  tape.label_features = GcnForwardCached(z.z, tape.ahat, params.gcn, tape.gcn);
  return tape.label_features;
}

}  // namespace

void ModelConfig::Validate() const {
  if (use_gat && (num_subgraphs == 0 || num_heads == 0)) {
    throw Error(ErrorKind::kConfig, "model: k and h must be >= 1");
  }
  if (feature_dim == 0) {
    throw Error(ErrorKind::kConfig, "model: feature dim must be >= 1");
  }
  for (std::size_t d : gcn_hidden) {
    if (d == 0) throw Error(ErrorKind::kConfig, "model: zero GCN hidden dim");
  }
  if (!(leaky_slope >= 0.0) || !std::isfinite(leaky_slope)) {
    throw Error(ErrorKind::kConfig, "model: leaky slope must be >= 0");
  }
}

std::vector<Matrix*> GradientBundle::Tensors() {
  std::vector<Matrix*> out;
  CollectGat(gat ? &*gat : nullptr, out);
  for (Matrix& m : gcn) out.push_back(&m);
  return out;
}

std::vector<const Matrix*> GradientBundle::Tensors() const {
  std::vector<const Matrix*> out;
  CollectGat(gat ? &*gat : nullptr, out);
  for (const Matrix& m : gcn) out.push_back(&m);
  return out;
}

std::vector<Matrix*> GatnParams::Tensors() {
  std::vector<Matrix*> out;
  CollectGat(gat ? &*gat : nullptr, out);
  for (GcnLayerParams& layer : gcn) out.push_back(&layer.w);
  return out;
}

std::vector<const Matrix*> GatnParams::Tensors() const {
  std::vector<const Matrix*> out;
  CollectGat(gat ? &*gat : nullptr, out);
  for (const GcnLayerParams& layer : gcn) out.push_back(&layer.w);
  return out;
}

std::size_t GatnParams::NumScalars() const {
  std::size_t total = 0;
  for (const Matrix* m : Tensors()) total += m->size();
  return total;
}

GradientBundle GatnParams::ZeroGradients() const {
  GradientBundle zero;
  zero.gat = gat;
  for (const GcnLayerParams& layer : gcn) zero.gcn.push_back(layer.w);
  for (Matrix* m : zero.Tensors()) std::fill(m->data().begin(), m->data().end(), 0.0);
  return zero;
}

GatnParams InitGatnParams(const ModelConfig& config, std::size_t num_labels,
                          std::size_t embed_dim, std::uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  GatnParams params;
  if (config.use_gat) {
    params.gat = InitGatLayer(num_labels, config.num_subgraphs,
                              config.num_heads,
                              config.ResolvedHeadDim(num_labels), rng);
  }
  std::vector<std::size_t> dims = {embed_dim};
  dims.insert(dims.end(), config.gcn_hidden.begin(), config.gcn_hidden.end());
  dims.push_back(config.feature_dim);
  params.gcn = InitGcnLayers(dims, config.leaky_slope, rng);
  params.momentum = params.ZeroGradients();
  return params;
}

std::size_t FeatureDim(const GatnParams& params) {
  return params.gcn.empty() ? 0 : params.gcn.back().out_dim();
}

void ValidateGatnParams(const GatnParams& params, std::size_t num_labels,
                        std::size_t embed_dim) {
  if (params.gat) ValidateGatLayer(*params.gat, num_labels);
  ValidateGcnChain(params.gcn, embed_dim, FeatureDim(params));
  const auto weights = params.Tensors();
  const auto buffers = params.momentum.Tensors();
  bool match = weights.size() == buffers.size();
  for (std::size_t i = 0; match && i < weights.size(); ++i)
    match = weights[i]->SameShape(*buffers[i]);
  if (!match) {
    throw Error(ErrorKind::kShape,
                "momentum buffers do not match the parameter shapes");
  }
}

std::vector<double> LabeledSample::Pooled() const {
  if (const auto* vec = std::get_if<std::vector<double>>(&features)) return *vec;
  return GlobalMaxPool(std::get<Matrix>(features));
}

Matrix Dataset::TargetMatrix() const {
  Matrix y(samples.size(), num_labels);
  for (std::size_t s = 0; s < samples.size(); ++s)
    std::copy(samples[s].targets.begin(), samples[s].targets.end(),
              y.row(s).begin());
  return y;
}

void TrainConfig::Validate() const {
  // lr == 0 is allowed: a frozen optimizer is useful for verification runs.
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw Error(ErrorKind::kValidation, "train: lr must be >= 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw Error(ErrorKind::kValidation, "train: momentum must be in [0, 1)");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw Error(ErrorKind::kValidation, "train: weight decay must be >= 0");
  }
  if (epochs < 1) throw Error(ErrorKind::kValidation, "train: epochs must be >= 1");
  if (batch_size < 1) {
    throw Error(ErrorKind::kValidation, "train: batch size must be >= 1");
  }
  if (!(lr_step_gamma > 0.0) || !std::isfinite(lr_step_gamma)) {
    throw Error(ErrorKind::kValidation, "train: lr step gamma must be > 0");
  }
}

double TrainConfig::LearningRateAt(std::size_t epoch) const {
  if (lr_step_epochs == 0) return lr;
  return lr * std::pow(lr_step_gamma,
                       static_cast<double>(epoch / lr_step_epochs));
}

std::vector<double> GlobalMaxPool(const Matrix& feature_map) {
  if (feature_map.cols() == 0) {
    throw Error(ErrorKind::kShape,
                "global_max_pool: feature map " + feature_map.ShapeString() +
                    " has no locations");
  }
  std::vector<double> pooled(feature_map.rows());
  for (std::size_t c = 0; c < feature_map.rows(); ++c) {
    auto r = feature_map.row(c);
    pooled[c] = *std::max_element(r.begin(), r.end());
  }
  return pooled;
}

std::vector<double> Predict(const Matrix& label_features,
                            std::span<const double> x) {
  return MatVec(label_features, x);
}

double BceLoss(std::span<const double> logits,
               std::span<const double> targets) {
  if (logits.size() != targets.size()) {
    throw Error(ErrorKind::kShape,
                "bce_loss: " + std::to_string(logits.size()) + " logits vs " +
                    std::to_string(targets.size()) + " targets");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double y = targets[i];
    if (y != 0.0 && y != 1.0) {
      throw Error(ErrorKind::kValidation,
                  "bce_loss: target " + std::to_string(i) + " is not 0 or 1");
    }
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    total += Softplus(logits[i]) - y * logits[i];
  }
  return total;
}

Matrix LabelFeatures(const GatnParams& params, const EmbeddingMatrix& z,
                     const AdjacencyMatrix& a) {
  Tape tape;
  return LabelBranch(params, z, a, tape);
}

ForwardResult Forward(const GatnParams& params, const EmbeddingMatrix& z,
                      const AdjacencyMatrix& a,
                      std::span<const LabeledSample> batch) {
  const Matrix w = LabelFeatures(params, z, a);
  const Matrix x = StackFeatures(batch, w.cols(), w.rows());
  ForwardResult result;
  result.logits = MatmulNT(x, w);
  result.loss = MeanLoss(result.logits, batch);
  return result;
}

LossAndGradients Gradients(const GatnParams& params, const EmbeddingMatrix& z,
                           const AdjacencyMatrix& a,
                           std::span<const LabeledSample> batch) {
  Tape tape;
  const Matrix w = LabelBranch(params, z, a, tape);
  const Matrix x = StackFeatures(batch, w.cols(), w.rows());
  const Matrix logits = MatmulNT(x, w);

  LossAndGradients out;
  out.loss = MeanLoss(logits, batch);

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  Matrix d_logits(logits.rows(), logits.cols());
  for (std::size_t s = 0; s < batch.size(); ++s)
    for (std::size_t i = 0; i < logits.cols(); ++i)
      d_logits(s, i) =
          (StableSigmoid(logits(s, i)) - batch[s].targets[i]) * inv_batch;

  // logits = X W^T  =>  dW = dlogits^T X
  const Matrix d_w = MatmulTN(d_logits, x);
  GcnGradients gcn = GcnBackward(tape.ahat, params.gcn, tape.gcn, d_w);
  out.grads.gcn = std::move(gcn.weights);
  if (params.gat) {
    const Matrix d_transformed =
        NormalizeAdjacencyBackward(tape.normalize, gcn.ahat);
    out.grads.gat =
        TransformAdjacencyBackward(a.a, *params.gat, tape.gat, d_transformed);
  }
  return out;
}

std::vector<double> CentralDifferences(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> theta, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::kValidation,
                "finite differences: step must be > 0");
  }
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double original = theta[i];
    theta[i] = original + step;
    const double up = f(theta);
    theta[i] = original - step;
    const double down = f(theta);
    theta[i] = original;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

GradientBundle FiniteDiffGradients(const GatnParams& params,
                                   const EmbeddingMatrix& z,
                                   const AdjacencyMatrix& a,
                                   std::span<const LabeledSample> batch,
                                   double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::kValidation,
                "finite differences: step must be > 0");
  }
  GatnParams probe = params;
  GradientBundle grads = params.ZeroGradients();
  auto targets = probe.Tensors();
  auto outputs = grads.Tensors();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    auto values = targets[t]->data();
    auto out = outputs[t]->data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + step;
      const double up = Forward(probe, z, a, batch).loss;
      values[i] = original - step;
      const double down = Forward(probe, z, a, batch).loss;
      values[i] = original;
      out[i] = (up - down) / (2.0 * step);
    }
  }
  return grads;
}

double MaxRelativeError(const GradientBundle& a, const GradientBundle& b,
                        double floor) {
  const auto lhs = a.Tensors();
  const auto rhs = b.Tensors();
  if (lhs.size() != rhs.size()) {
    throw Error(ErrorKind::kShape, "gradient bundles have different layouts");
  }
  double worst = 0.0;
  for (std::size_t t = 0; t < lhs.size(); ++t) {
    if (!lhs[t]->SameShape(*rhs[t])) {
      throw Error(ErrorKind::kShape, "gradient bundles have different shapes");
    }
    const auto x = lhs[t]->data();
    const auto y = rhs[t]->data();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double scale = std::max({std::abs(x[i]), std::abs(y[i]), floor});
      worst = std::max(worst, std::abs(x[i] - y[i]) / scale);
    }
  }
  return worst;
}

void SgdStep(GatnParams& params, const GradientBundle& grads,
             const TrainConfig& config) {
  auto weights = params.Tensors();
  auto velocity = params.momentum.Tensors();
  const auto g = grads.Tensors();
  if (weights.size() != g.size() || weights.size() != velocity.size()) {
    throw Error(ErrorKind::kShape,
                "sgd_step: gradient bundle does not match parameters");
  }
  for (std::size_t t = 0; t < weights.size(); ++t) {
    if (!weights[t]->SameShape(*g[t]) || !weights[t]->SameShape(*velocity[t])) {
      throw Error(ErrorKind::kShape, "sgd_step: tensor " + std::to_string(t) +
                                         " shape mismatch " +
                                         weights[t]->ShapeString() + " vs " +
                                         g[t]->ShapeString());
    }
  }
  for (std::size_t t = 0; t < weights.size(); ++t) {
    auto theta = weights[t]->data();
    auto v = velocity[t]->data();
    const auto grad = g[t]->data();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      v[i] = config.momentum * v[i] + (grad[i] + config.weight_decay * theta[i]);
      theta[i] -= config.lr * v[i];
    }
    CheckFinite(*weights[t], "sgd_step");
  }
}

TrainResult TrainFrom(GatnParams init, const TrainConfig& config,
                      const EmbeddingMatrix& z, const AdjacencyMatrix& a,
                      std::span<const LabeledSample> dataset) {
  config.Validate();
  if (dataset.empty()) {
    throw Error(ErrorKind::kValidation, "train: empty dataset");
  }
  ValidateGatnParams(init, z.num_labels(), z.dim());

  TrainResult result{std::move(init), {}};
  // Independent stream from the initializer, which consumes `seed` itself.
  Rng order_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledSample> batch;
  batch.reserve(config.batch_size);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[order_rng.Below(i)]);

    TrainConfig step_config = config;
    step_config.lr = config.LearningRateAt(epoch);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i)
        batch.push_back(dataset[order[i]]);
      LossAndGradients lg = Gradients(result.params, z, a, batch);
      epoch_loss += lg.loss * static_cast<double>(batch.size());
      SgdStep(result.params, lg.grads, step_config);
    }
    result.loss_history.push_back(epoch_loss /
                                  static_cast<double>(dataset.size()));
  }
  return result;
}

TrainResult Train(const TrainConfig& config, const ModelConfig& model,
                  const EmbeddingMatrix& z, const AdjacencyMatrix& a,
                  std::span<const LabeledSample> dataset) {
  config.Validate();
  return TrainFrom(InitGatnParams(model, z.num_labels(), z.dim(), config.seed),
                   config, z, a, dataset);
}

}  // namespace gatn
