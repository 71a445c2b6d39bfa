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

#ifndef GATN_GCN_H_
#define GATN_GCN_H_

#include <vector>

#include "gatn/corr.h"
#include "gatn/embeddings.h"
#include "gatn/matrix.h"
#include "gatn/random.h"

namespace gatn {

// Degree floor used by NormalizeAdjacency.
inline constexpr double kDegreeEpsilon = 1e-6;

enum class Activation { kLeakyRelu, kIdentity };

struct GcnLayerParams {
  Matrix w;  // in_dim x out_dim
  Activation activation = Activation::kLeakyRelu;
  double slope = 0.2;

  std::size_t in_dim() const { return w.rows(); }
  std::size_t out_dim() const { return w.cols(); }
};

// A-hat = D^-1/2 (A' + I) D^-1/2 with D_ii = max(sum_j |A'_ij + I_ij|, eps).
// Absolute row sums keep the normalization defined when A' has negative
// entries.
AdjacencyMatrix NormalizeAdjacency(const AdjacencyMatrix& transformed);

// activation(A-hat * H * W)
Matrix GcnLayer(const Matrix& h, const AdjacencyMatrix& ahat,
                const GcnLayerParams& layer);

// Checks in_dim(l+1) == out_dim(l), the chain starts at `in_dim` and ends at
// `out_dim`. Throws kConfig.
void ValidateGcnChain(const std::vector<GcnLayerParams>& layers,
                      std::size_t in_dim, std::size_t out_dim);

// Folds GcnLayer over `layers` starting from Z.
Matrix GcnForward(const EmbeddingMatrix& z, const AdjacencyMatrix& ahat,
                  const std::vector<GcnLayerParams>& layers);

// dims = {d, hidden..., D}. Hidden layers use leaky ReLU with `slope`, the
// last layer is linear. Weights uniform on [-1/sqrt(out), 1/sqrt(out)].
std::vector<GcnLayerParams> InitGcnLayers(const std::vector<std::size_t>& dims,
                                          double slope, Rng& rng);

// Differentiation support.

struct NormalizeCache {
  Matrix with_self_loops;         // A' + I
  std::vector<double> raw_degree;  // sum_j |A'_ij + I_ij| before flooring
  std::vector<double> inv_sqrt_degree;
};

Matrix NormalizeAdjacencyForward(const Matrix& transformed,
                                 NormalizeCache& cache);
// dL/dA' from dL/dA-hat.
Matrix NormalizeAdjacencyBackward(const NormalizeCache& cache,
                                  const Matrix& d_normalized);

struct GcnForwardCache {
  std::vector<Matrix> inputs;        // H^(l)
  std::vector<Matrix> projected;     // H^(l) W^(l)
  std::vector<Matrix> preactivation;  // A-hat H^(l) W^(l)
};

Matrix GcnForwardCached(const Matrix& z, const Matrix& ahat,
                        const std::vector<GcnLayerParams>& layers,
                        GcnForwardCache& cache);

struct GcnGradients {
  std::vector<Matrix> weights;
  Matrix ahat;
};

GcnGradients GcnBackward(const Matrix& ahat,
                         const std::vector<GcnLayerParams>& layers,
                         const GcnForwardCache& cache, const Matrix& d_output);

}  // namespace gatn

#endif  // GATN_GCN_H_
