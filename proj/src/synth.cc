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

#include "gatn/synth.h"

#include <cmath>
#include <string>

#include "gatn/random.h"

namespace gatn {
namespace {

constexpr std::size_t kGroupSize = 3;

}  // namespace

SynthData Synthesize(const SynthConfig& config) {
  const std::size_t n = config.num_labels;
  if (n == 0 || config.num_samples < 2 || config.feature_dim == 0 ||
      config.embed_dim == 0) {
    throw Error(ErrorKind::kValidation,
                "synth: need >= 1 label, >= 2 samples and positive dims");
  }
  Rng rng(config.seed);
  const std::size_t groups = (n + kGroupSize - 1) / kGroupSize;

  SynthData out;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < n; ++c) names.push_back("class" + std::to_string(c));
  out.vocab = LabelVocabulary(names);

  // Embeddings: group centre plus a smaller per-label offset.
  std::vector<std::vector<double>> centres(groups,
                                           std::vector<double>(config.embed_dim));
  for (auto& centre : centres)
    for (double& v : centre) v = rng.Normal();
  out.table.dim = config.embed_dim;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> vec = centres[c / kGroupSize];
    for (double& v : vec) v += 0.6 * rng.Normal();
    out.table.entries.emplace(names[c], vec);
    out.table.order.push_back(names[c]);
  }

  std::vector<std::vector<double>> prototypes(
      n, std::vector<double>(config.feature_dim));
  for (auto& proto : prototypes)
    for (double& v : proto) v = rng.Normal();

  Dataset& ds = out.dataset;
  ds.num_labels = n;
  ds.feature_dim = config.feature_dim;
  for (std::size_t s = 0; s < config.num_samples; ++s) {
    const std::size_t active = rng.Below(groups);
    std::vector<double> y(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      const double rate = c / kGroupSize == active ? 0.7 : 0.15;
      y[c] = rng.Uniform() < rate ? 1.0 : 0.0;
    }
    ds.samples.push_back({std::vector<double>(), std::move(y)});
  }
  // Make every class both present and absent somewhere.
  for (std::size_t c = 0; c < n; ++c) {
    ds.samples[c % config.num_samples].targets[c] = 1.0;
    ds.samples[(c + 1) % config.num_samples].targets[c] = 0.0;
  }
  const double feature_scale =
      1.0 / std::sqrt(static_cast<double>(n * config.feature_dim));
  for (LabeledSample& sample : ds.samples) {
    std::vector<double> x(config.feature_dim, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      const double sign = 2.0 * sample.targets[c] - 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) x[k] += sign * prototypes[c][k];
    }
    for (double& v : x) v += config.noise * rng.Normal();
    // Unit expected norm, like normalized backbone features. Raw sums of n
    // prototypes start the logits in the tens, and at the default learning
    // rate the attention layer then collapses.
    for (double& v : x) v *= feature_scale;
    sample.features = std::move(x);
  }
  return out;
}

ToyProblem GradcheckToy(std::uint64_t seed) {
  SynthConfig sc;
  sc.num_labels = 5;
  sc.num_samples = 4;
  sc.feature_dim = 6;
  sc.embed_dim = 8;
  sc.seed = seed;
  SynthData data = Synthesize(sc);

  ModelConfig model;
  model.num_subgraphs = 2;
  model.num_heads = 2;
  model.head_dim = 5;
  model.gcn_hidden = {7};
  model.feature_dim = sc.feature_dim;

  ToyProblem toy;
  toy.z = BuildEmbeddingMatrix(data.vocab, data.table);
  toy.a = BuildCorrelation(toy.z, CorrPipelineConfig{});
  toy.params = InitGatnParams(model, sc.num_labels, sc.embed_dim, seed);
  toy.batch = std::move(data.dataset.samples);
  return toy;
}

}  // namespace gatn
