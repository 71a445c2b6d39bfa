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

#ifndef GATN_CORR_H_
#define GATN_CORR_H_

#include <string>

#include "gatn/embeddings.h"
#include "gatn/matrix.h"

namespace gatn {

// Pipeline stage an adjacency matrix belongs to.
enum class Stage {
  kSimilarity,   // R: cosine similarity
  kBinary,       // R': thresholded at tau
  kReweighted,   // A: diagonal 1-p, off-diagonal mass p per row
  kTransformed,  // A': output of the graph attention transformer layer
  kNormalized,   // A-hat: symmetric degree normalization with self loops
};

// Short stage codes used by the matrix JSON schema: R, Rp, A, At, Ahat.
const char* StageCode(Stage stage);
Stage StageFromCode(const std::string& code);

struct AdjacencyMatrix {
  Matrix a;
  Stage stage = Stage::kSimilarity;

  std::size_t n() const { return a.rows(); }
};

struct CorrPipelineConfig {
  double tau = 0.2;
  double p = 0.2;

  // Throws kValidation unless 0 <= tau <= 1 and 0 < p < 1.
  void Validate() const;
};

AdjacencyMatrix CosineSimilarityMatrix(const EmbeddingMatrix& z);

// 1 where R(i,j) >= tau, else 0.
AdjacencyMatrix Binarize(const AdjacencyMatrix& r, double tau);

// A(i,i) = 1-p; A(i,j) = p * R'(i,j) / sum_{k!=i} R'(i,k). Rows without any
// off-diagonal neighbor keep zero off-diagonals.
AdjacencyMatrix Reweight(const AdjacencyMatrix& rp, double p);

AdjacencyMatrix BuildCorrelation(const EmbeddingMatrix& z,
                                 const CorrPipelineConfig& cfg);

// Row i of the conditional matrix holds P(j | i) = count(i and j) / count(i)
// over the rows of `labels` (samples x n, entries 0/1).
Matrix ConditionalProbabilities(const Matrix& labels);

// Co-occurrence baseline: conditional probabilities, then threshold and
// re-weight exactly like the embedding pipeline.
AdjacencyMatrix CooccurrenceMatrix(const Matrix& labels,
                                   const CorrPipelineConfig& cfg);

}  // namespace gatn

#endif  // GATN_CORR_H_
