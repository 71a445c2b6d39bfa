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

#include "gatn/gat_layer.h"

#include <cmath>
#include <string>

namespace gatn {
namespace {

void RequireSquare(const Matrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kShape, std::string(op) +
                                       ": adjacency must be square, got " +
                                       a.ShapeString());
  }
}

void ValidateHead(const HeadParams& head, std::size_t n) {
  if (head.wq.rows() != n || head.hidden() == 0 ||
      !head.wq.SameShape(head.wk) || !head.wq.SameShape(head.wv)) {
    throw Error(ErrorKind::kShape,
                "attention head: projections must all be " +
                    std::to_string(n) + " x hidden, got " +
                    head.wq.ShapeString() + ", " + head.wk.ShapeString() +
                    ", " + head.wv.ShapeString());
  }
}

void ValidateSubGraph(const SubGraphParams& sg, std::size_t n) {
  if (sg.heads.empty()) {
    throw Error(ErrorKind::kConfig, "sub-graph: needs at least one head");
  }
  std::size_t width = 0;
  for (const HeadParams& head : sg.heads) {
    ValidateHead(head, n);
    width += head.hidden();
  }
  if (sg.wo.rows() != width || sg.wo.cols() != n) {
    throw Error(ErrorKind::kShape, "sub-graph: output projection must be " +
                                       std::to_string(width) + " x " +
                                       std::to_string(n) + ", got " +
                                       sg.wo.ShapeString());
  }
}

Matrix RandomMatrix(std::size_t rows, std::size_t cols, double bound,
                    Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.Uniform(-bound, bound);
  return m;
}

GatForwardCache::Head HeadForward(const Matrix& a, const HeadParams& head) {
  GatForwardCache::Head out;
  out.q = Matmul(a, head.wq);
  out.k = Matmul(a, head.wk);
  out.v = Matmul(a, head.wv);
  const double scale = 1.0 / std::sqrt(static_cast<double>(head.hidden()));
  out.probs = RowSoftmax(Scale(MatmulNT(out.q, out.k), scale));
  return out;
}

GatForwardCache::SubGraph SubGraphForward(const Matrix& a,
                                          const SubGraphParams& sg) {
  GatForwardCache::SubGraph out;
  std::vector<Matrix> outputs;
  outputs.reserve(sg.heads.size());
  for (const HeadParams& head : sg.heads) {
    out.heads.push_back(HeadForward(a, head));
    const auto& h = out.heads.back();
    outputs.push_back(Matmul(h.probs, h.v));
  }
  out.concat = ConcatCols(outputs);
  out.g = Matmul(out.concat, sg.wo);
  return out;
}

}  // namespace

void ValidateGatLayer(const GatLayerParams& params, std::size_t n) {
  if (params.subgraphs.empty()) {
    throw Error(ErrorKind::kConfig,
                "graph attention layer: needs at least one sub-graph");
  }
  for (const SubGraphParams& sg : params.subgraphs) ValidateSubGraph(sg, n);
}

GatLayerParams InitGatLayer(std::size_t n, std::size_t num_subgraphs,
                            std::size_t num_heads, std::size_t head_dim,
                            Rng& rng) {
  if (n == 0 || num_subgraphs == 0 || num_heads == 0 || head_dim == 0) {
    throw Error(ErrorKind::kConfig,
                "graph attention layer: n, k, h and head dim must be >= 1");
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(n));
  GatLayerParams params;
  for (std::size_t j = 0; j < num_subgraphs; ++j) {
    SubGraphParams sg;
    for (std::size_t i = 0; i < num_heads; ++i) {
      HeadParams head;
      head.wq = RandomMatrix(n, head_dim, bound, rng);
      head.wk = RandomMatrix(n, head_dim, bound, rng);
      head.wv = RandomMatrix(n, head_dim, bound, rng);
      sg.heads.push_back(std::move(head));
    }
    sg.wo = RandomMatrix(num_heads * head_dim, n, bound, rng);
    params.subgraphs.push_back(std::move(sg));
  }
  return params;
}

Matrix AttentionHead(const AdjacencyMatrix& a, const HeadParams& head) {
  RequireSquare(a.a, "attention_head");
  ValidateHead(head, a.n());
  const auto h = HeadForward(a.a, head);
  return Matmul(h.probs, h.v);
}

Matrix SubGraph(const AdjacencyMatrix& a, const SubGraphParams& params) {
  RequireSquare(a.a, "subgraph");
  ValidateSubGraph(params, a.n());
  return SubGraphForward(a.a, params).g;
}

Matrix TransformAdjacencyForward(const Matrix& a, const GatLayerParams& params,
                                 GatForwardCache& cache) {
  RequireSquare(a, "transform_adjacency");
  ValidateGatLayer(params, a.rows());
  cache.subgraphs.clear();
  for (const SubGraphParams& sg : params.subgraphs)
    cache.subgraphs.push_back(SubGraphForward(a, sg));
  Matrix product = cache.subgraphs.front().g;
  for (std::size_t j = 1; j < cache.subgraphs.size(); ++j)
    product = Matmul(product, cache.subgraphs[j].g);
  return product;
}

AdjacencyMatrix TransformAdjacency(const AdjacencyMatrix& a,
                                   const GatLayerParams& params) {
  GatForwardCache cache;
  return {TransformAdjacencyForward(a.a, params, cache), Stage::kTransformed};
}

GatLayerParams TransformAdjacencyBackward(const Matrix& a,
                                          const GatLayerParams& params,
                                          const GatForwardCache& cache,
                                          const Matrix& d_transformed) {
  const std::size_t k = cache.subgraphs.size();
  const std::size_t n = a.rows();

  // prefix[j] = G_1 ... G_j (identity for j = 0), suffix[j] = G_{j+1} ... G_k.
  std::vector<Matrix> prefix(k + 1), suffix(k + 1);
  prefix[0] = Matrix::Identity(n);
  for (std::size_t j = 0; j < k; ++j)
    prefix[j + 1] = Matmul(prefix[j], cache.subgraphs[j].g);
  suffix[k] = Matrix::Identity(n);
  for (std::size_t j = k; j-- > 0;)
    suffix[j] = Matmul(cache.subgraphs[j].g, suffix[j + 1]);

  GatLayerParams grads = params;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& sg_cache = cache.subgraphs[j];
    const SubGraphParams& sg = params.subgraphs[j];
    SubGraphParams& sg_grad = grads.subgraphs[j];

    // dG_j = prefix^T dA' suffix^T
    const Matrix d_g = MatmulNT(MatmulTN(prefix[j], d_transformed), suffix[j + 1]);
    sg_grad.wo = MatmulTN(sg_cache.concat, d_g);
    const Matrix d_concat = MatmulNT(d_g, sg.wo);

    std::size_t offset = 0;
    for (std::size_t i = 0; i < sg.heads.size(); ++i) {
      const auto& hc = sg_cache.heads[i];
      const std::size_t hidden = sg.heads[i].hidden();
      const Matrix d_out = SliceCols(d_concat, offset, hidden);
      offset += hidden;

      const Matrix d_v = MatmulTN(hc.probs, d_out);
      const Matrix d_probs = MatmulNT(d_out, hc.v);
      Matrix d_scores(n, n);
      for (std::size_t r = 0; r < n; ++r) {
        auto p = hc.probs.row(r);
        auto dp = d_probs.row(r);
        double dot = 0.0;
        for (std::size_t c = 0; c < n; ++c) dot += p[c] * dp[c];
        for (std::size_t c = 0; c < n; ++c)
          d_scores(r, c) = p[c] * (dp[c] - dot);
      }
      const double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
      const Matrix d_q = Scale(Matmul(d_scores, hc.k), scale);
      const Matrix d_k = Scale(MatmulTN(d_scores, hc.q), scale);

      HeadParams& hg = sg_grad.heads[i];
      hg.wq = MatmulTN(a, d_q);
      hg.wk = MatmulTN(a, d_k);
      hg.wv = MatmulTN(a, d_v);
    }
  }
  return grads;
}

}  // namespace gatn
