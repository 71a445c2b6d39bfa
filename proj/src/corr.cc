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

#include "gatn/corr.h"

#include <algorithm>
#include <cmath>

namespace gatn {
namespace {

void RequireSquare(const Matrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::kShape,
                std::string(op) + ": expected a square matrix, got " +
                    m.ShapeString());
  }
}

void RequireStage(const AdjacencyMatrix& m, Stage expected, const char* op) {
  if (m.stage != expected) {
    throw Error(ErrorKind::kValidation,
                std::string(op) + ": expected stage " + StageCode(expected) +
                    ", got " + StageCode(m.stage));
  }
}

Matrix BinarizeValues(const Matrix& r, double tau) {
  Matrix out(r.rows(), r.cols());
  for (std::size_t i = 0; i < r.size(); ++i)
    out.data()[i] = r.data()[i] >= tau ? 1.0 : 0.0;
  return out;
}

// The builders accept any tau (tau > 1 simply keeps no edge); only p has to
// be in range for the re-weighting to mean anything.
void CheckReweightParameter(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kValidation,
                "p must lie in (0, 1), got " + std::to_string(p));
  }
}

}  // namespace

const char* StageCode(Stage stage) {
  switch (stage) {
    case Stage::kSimilarity: return "R";
    case Stage::kBinary: return "Rp";
    case Stage::kReweighted: return "A";
    case Stage::kTransformed: return "At";
    case Stage::kNormalized: return "Ahat";
  }
  return "?";
}

Stage StageFromCode(const std::string& code) {
  if (code == "R") return Stage::kSimilarity;
  if (code == "Rp") return Stage::kBinary;
  if (code == "A") return Stage::kReweighted;
  if (code == "At") return Stage::kTransformed;
  if (code == "Ahat") return Stage::kNormalized;
  throw Error(ErrorKind::kParse, "unknown adjacency stage '" + code + "'");
}

void CorrPipelineConfig::Validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorKind::kValidation,
                "tau must lie in [0, 1], got " + std::to_string(tau));
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kValidation,
                "p must lie in (0, 1), got " + std::to_string(p));
  }
}

AdjacencyMatrix CosineSimilarityMatrix(const EmbeddingMatrix& emb) {
  const Matrix& z = emb.z;
  const std::size_t n = z.rows();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : z.row(i)) s += v * v;
    if (s == 0.0) {
      throw Error(ErrorKind::kDegenerate,
                  "cosine similarity: label index " + std::to_string(i) +
                      " has a zero-norm embedding");
    }
    norms[i] = std::sqrt(s);
  }
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      auto zi = z.row(i);
      auto zj = z.row(j);
      for (std::size_t k = 0; k < zi.size(); ++k) dot += zi[k] * zj[k];
      // Rounding can push |cos| a hair past 1.
      const double c = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      r(i, j) = c;
      r(j, i) = c;
    }
  }
  return {std::move(r), Stage::kSimilarity};
}

AdjacencyMatrix Binarize(const AdjacencyMatrix& r, double tau) {
  RequireSquare(r.a, "binarize");
  RequireStage(r, Stage::kSimilarity, "binarize");
  return {BinarizeValues(r.a, tau), Stage::kBinary};
}

AdjacencyMatrix Reweight(const AdjacencyMatrix& rp, double p) {
  RequireSquare(rp.a, "reweight");
  RequireStage(rp, Stage::kBinary, "reweight");
  const std::size_t n = rp.n();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double neighbors = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) neighbors += rp.a(i, j);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        a(i, j) = 1.0 - p;
      } else if (neighbors > 0.0) {
        a(i, j) = p * rp.a(i, j) / neighbors;
      }
    }
  }
  return {std::move(a), Stage::kReweighted};
}

AdjacencyMatrix BuildCorrelation(const EmbeddingMatrix& z,
                                 const CorrPipelineConfig& cfg) {
  CheckReweightParameter(cfg.p);
  return Reweight(Binarize(CosineSimilarityMatrix(z), cfg.tau), cfg.p);
}

Matrix ConditionalProbabilities(const Matrix& labels) {
  const std::size_t n = labels.cols();
  for (double v : labels.data()) {
    if (v != 0.0 && v != 1.0) {
      throw Error(ErrorKind::kValidation,
                  "co-occurrence: label entries must be 0 or 1");
    }
  }
  Matrix joint = MatmulTN(labels, labels);  // n x n pair counts
  Matrix cond(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double count = joint(i, i);
    if (count == 0.0) {
      throw Error(ErrorKind::kDegenerate,
                  "co-occurrence: class index " + std::to_string(i) +
                      " never occurs");
    }
    for (std::size_t j = 0; j < n; ++j) cond(i, j) = joint(i, j) / count;
  }
  return cond;
}

AdjacencyMatrix CooccurrenceMatrix(const Matrix& labels,
                                   const CorrPipelineConfig& cfg) {
  CheckReweightParameter(cfg.p);
  AdjacencyMatrix rp{BinarizeValues(ConditionalProbabilities(labels), cfg.tau),
                     Stage::kBinary};
  return Reweight(rp, cfg.p);
}

}  // namespace gatn
