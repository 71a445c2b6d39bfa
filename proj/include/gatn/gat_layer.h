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

#ifndef GATN_GAT_LAYER_H_
#define GATN_GAT_LAYER_H_

#include <vector>

#include "gatn/corr.h"
#include "gatn/matrix.h"
#include "gatn/random.h"

namespace gatn {

// Query/key/value projections of one attention head, each n x hidden.
struct HeadParams {
  Matrix wq;
  Matrix wk;
  Matrix wv;

  std::size_t hidden() const { return wq.cols(); }
};

// h heads plus the output projection W^O of shape (h * hidden) x n.
struct SubGraphParams {
  std::vector<HeadParams> heads;
  Matrix wo;
};

// k sub-graphs with independent parameters.
struct GatLayerParams {
  std::vector<SubGraphParams> subgraphs;

  std::size_t num_subgraphs() const { return subgraphs.size(); }
  std::size_t num_heads() const {
    return subgraphs.empty() ? 0 : subgraphs.front().heads.size();
  }
  std::size_t head_dim() const {
    return num_heads() == 0 ? 0 : subgraphs.front().heads.front().hidden();
  }
};

// Throws kShape/kConfig when the bundle does not fit an n-node graph.
void ValidateGatLayer(const GatLayerParams& params, std::size_t n);

// Every weight drawn uniformly from [-1/sqrt(n), 1/sqrt(n)].
GatLayerParams InitGatLayer(std::size_t n, std::size_t num_subgraphs,
                            std::size_t num_heads, std::size_t head_dim,
                            Rng& rng);

// softmax((A Wq)(A Wk)^T / sqrt(hidden)) (A Wv)
Matrix AttentionHead(const AdjacencyMatrix& a, const HeadParams& head);

// Concat(head outputs) * W^O, an n x n sub-graph.
Matrix SubGraph(const AdjacencyMatrix& a, const SubGraphParams& params);

// A' = G_1 * G_2 * ... * G_k, in sub-graph index order.
AdjacencyMatrix TransformAdjacency(const AdjacencyMatrix& a,
                                   const GatLayerParams& params);

// Intermediates retained by the forward pass for differentiation.
struct GatForwardCache {
  struct Head {
    Matrix q, k, v;
    Matrix probs;  // row-stochastic attention weights
  };
  struct SubGraph {
    std::vector<Head> heads;
    Matrix concat;  // n x (h * hidden)
    Matrix g;       // n x n
  };
  std::vector<SubGraph> subgraphs;
};

Matrix TransformAdjacencyForward(const Matrix& a, const GatLayerParams& params,
                                 GatForwardCache& cache);

// Given dL/dA', returns dL/dW for every weight of `params` (same layout).
GatLayerParams TransformAdjacencyBackward(const Matrix& a,
                                          const GatLayerParams& params,
                                          const GatForwardCache& cache,
                                          const Matrix& d_transformed);

}  // namespace gatn

#endif  // GATN_GAT_LAYER_H_
