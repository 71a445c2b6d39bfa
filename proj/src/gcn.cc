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

#include "gatn/gcn.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace gatn {
namespace {

Matrix Activate(const Matrix& m, const GcnLayerParams& layer) {
  return layer.activation == Activation::kLeakyRelu ? LeakyRelu(m, layer.slope)
                                                    : m;
}

}  // namespace

Matrix NormalizeAdjacencyForward(const Matrix& transformed,
                                 NormalizeCache& cache) {
  if (transformed.rows() != transformed.cols()) {
    throw Error(ErrorKind::kShape,
                "normalize_adjacency: expected a square matrix, got " +
                    transformed.ShapeString());
  }
  const std::size_t n = transformed.rows();
  cache.with_self_loops = Add(transformed, Matrix::Identity(n));
  cache.raw_degree.assign(n, 0.0);
  cache.inv_sqrt_degree.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double v : cache.with_self_loops.row(i)) sum += std::abs(v);
    cache.raw_degree[i] = sum;
    cache.inv_sqrt_degree[i] = 1.0 / std::sqrt(std::max(sum, kDegreeEpsilon));
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = cache.inv_sqrt_degree[i] * cache.with_self_loops(i, j) *
                  cache.inv_sqrt_degree[j];
  CheckFinite(out, "normalize_adjacency");
  return out;
}

Matrix NormalizeAdjacencyBackward(const NormalizeCache& cache,
                                  const Matrix& d_normalized) {
  const Matrix& tilde = cache.with_self_loops;
  const auto& s = cache.inv_sqrt_degree;
  const std::size_t n = tilde.rows();

  // A-hat_ij = s_i * tilde_ij * s_j, so s_i enters row i and column i.
  std::vector<double> d_s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double g = d_normalized(i, j) * tilde(i, j);
      d_s[i] += g * s[j];
      d_s[j] += g * s[i];
    }

  Matrix d_tilde(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    // s = d^-1/2  =>  ds/dd = -s^3 / 2; zero once the floor is active.
    const double d_degree = cache.raw_degree[i] > kDegreeEpsilon
                                ? -0.5 * s[i] * s[i] * s[i] * d_s[i]
                                : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = tilde(i, j);
      const double sign = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
      d_tilde(i, j) = d_normalized(i, j) * s[i] * s[j] + sign * d_degree;
    }
  }
  return d_tilde;
}

AdjacencyMatrix NormalizeAdjacency(const AdjacencyMatrix& transformed) {
  NormalizeCache cache;
  return {NormalizeAdjacencyForward(transformed.a, cache), Stage::kNormalized};
}

Matrix GcnLayer(const Matrix& h, const AdjacencyMatrix& ahat,
                const GcnLayerParams& layer) {
  if (ahat.a.rows() != ahat.a.cols() || ahat.a.cols() != h.rows()) {
    throw Error(ErrorKind::kShape, "gcn_layer: adjacency " +
                                       ahat.a.ShapeString() +
                                       " does not match node features " +
                                       h.ShapeString());
  }
  return Activate(Matmul(ahat.a, Matmul(h, layer.w)), layer);
}

void ValidateGcnChain(const std::vector<GcnLayerParams>& layers,
                      std::size_t in_dim, std::size_t out_dim) {
  if (layers.empty()) {
    throw Error(ErrorKind::kConfig, "gcn: at least one layer is required");
  }
  std::size_t expected = in_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].in_dim() != expected || layers[l].out_dim() == 0) {
      throw Error(ErrorKind::kConfig,
                  "gcn: layer " + std::to_string(l) + " has weight " +
                      layers[l].w.ShapeString() + " but input dim is " +
                      std::to_string(expected));
    }
    expected = layers[l].out_dim();
  }
  if (expected != out_dim) {
    throw Error(ErrorKind::kConfig, "gcn: chain ends at dim " +
                                        std::to_string(expected) +
                                        ", expected " + std::to_string(out_dim));
  }
}

Matrix GcnForward(const EmbeddingMatrix& z, const AdjacencyMatrix& ahat,
                  const std::vector<GcnLayerParams>& layers) {
  ValidateGcnChain(layers, z.dim(), layers.empty() ? 0 : layers.back().out_dim());
  Matrix h = z.z;
  for (const GcnLayerParams& layer : layers) h = GcnLayer(h, ahat, layer);
  return h;
}

std::vector<GcnLayerParams> InitGcnLayers(const std::vector<std::size_t>& dims,
                                          double slope, Rng& rng) {
  if (dims.size() < 2) {
    throw Error(ErrorKind::kConfig, "gcn: need at least input and output dims");
  }
  std::vector<GcnLayerParams> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] == 0 || dims[l + 1] == 0) {
      throw Error(ErrorKind::kConfig, "gcn: zero layer dimension");
    }
    GcnLayerParams layer;
    layer.w = Matrix(dims[l], dims[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l + 1]));
    for (double& v : layer.w.data()) v = rng.Uniform(-bound, bound);
    const bool last = l + 2 == dims.size();
    layer.activation = last ? Activation::kIdentity : Activation::kLeakyRelu;
    layer.slope = slope;
    layers.push_back(std::move(layer));
  }
  return layers;
}

Matrix GcnForwardCached(const Matrix& z, const Matrix& ahat,
                        const std::vector<GcnLayerParams>& layers,
                        GcnForwardCache& cache) {
  ValidateGcnChain(layers, z.cols(), layers.empty() ? 0 : layers.back().out_dim());
  if (ahat.rows() != z.rows() || ahat.cols() != z.rows()) {
    throw Error(ErrorKind::kShape, "gcn: adjacency " + ahat.ShapeString() +
                                       " does not match embeddings " +
                                       z.ShapeString());
  }
  cache = {};
  Matrix h = z;
  for (const GcnLayerParams& layer : layers) {
    cache.inputs.push_back(h);
    cache.projected.push_back(Matmul(h, layer.w));
    cache.preactivation.push_back(Matmul(ahat, cache.projected.back()));
    h = Activate(cache.preactivation.back(), layer);
  }
  return h;
}

GcnGradients GcnBackward(const Matrix& ahat,
                         const std::vector<GcnLayerParams>& layers,
                         const GcnForwardCache& cache, const Matrix& d_output) {
  GcnGradients grads;
  grads.weights.resize(layers.size());
  grads.ahat = Matrix(ahat.rows(), ahat.cols());
  Matrix d_h = d_output;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const GcnLayerParams& layer = layers[l];
    Matrix d_pre = d_h;
    if (layer.activation == Activation::kLeakyRelu) {
      const auto pre = cache.preactivation[l].data();
      auto d = d_pre.data();
      for (std::size_t i = 0; i < d.size(); ++i)
        if (pre[i] < 0.0) d[i] *= layer.slope;
    }
    // pre = A-hat * (H W)
    AddScaledInPlace(grads.ahat, MatmulNT(d_pre, cache.projected[l]), 1.0);
    const Matrix d_projected = MatmulTN(ahat, d_pre);
    grads.weights[l] = MatmulTN(cache.inputs[l], d_projected);
    if (l > 0) d_h = MatmulNT(d_projected, layer.w);
  }
  return grads;
}

}  // namespace gatn
