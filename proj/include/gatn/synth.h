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

#ifndef GATN_SYNTH_H_
#define GATN_SYNTH_H_

#include <cstdint>

#include "gatn/corr.h"
#include "gatn/embeddings.h"
#include "gatn/model.h"

namespace gatn {

struct SynthConfig {
  std::size_t num_labels = 6;
  std::size_t num_samples = 64;
  std::size_t feature_dim = 12;
  std::size_t embed_dim = 8;
  double noise = 0.05;
  std::uint64_t seed = 42;
};

// A toy problem standing in for images plus word vectors.
//
// Labels fall into groups of three; members of a group get nearby embeddings
// and tend to co-occur. Each label c owns a random prototype u_c and a sample
// with targets y has features (sum_c (2 y_c - 1) u_c + noise) / sqrt(n D), so
// every label is linearly separable through the origin as long as the
// prototypes are independent, and features have roughly unit norm. Every class is positive in at least one sample and negative in
// at least one.
struct SynthData {
  LabelVocabulary vocab;
  EmbeddingTable table;
  Dataset dataset;
};

SynthData Synthesize(const SynthConfig& config);

// Small fully specified problem used for gradient verification: n = 5
// labels, d = 8, D = 6, k = 2 sub-graphs, h = 2 heads of width 5, one GCN
// hidden layer of width 7, a batch of 4 samples. Everything derives from
// `seed`.
struct ToyProblem {
  EmbeddingMatrix z;
  AdjacencyMatrix a;
  GatnParams params;
  std::vector<LabeledSample> batch;
};

ToyProblem GradcheckToy(std::uint64_t seed);

}  // namespace gatn

#endif  // GATN_SYNTH_H_
