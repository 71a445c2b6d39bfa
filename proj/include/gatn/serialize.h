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

#ifndef GATN_SERIALIZE_H_
#define GATN_SERIALIZE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "gatn/corr.h"
#include "gatn/embeddings.h"
#include "gatn/gat_layer.h"
#include "gatn/metrics.h"
#include "gatn/model.h"

namespace gatn {

using Json = nlohmann::json;

// {"rows": r, "cols": c, "data": [[...], ...]}
Json MatrixToJson(const Matrix& m);
Matrix MatrixFromJson(const Json& j);

// {"n": n, "stage": "R|Rp|A|At|Ahat", "data": [[...]]} plus an optional
// "labels" array naming the nodes.
Json AdjacencyToJson(const AdjacencyMatrix& a,
                     const std::vector<std::string>& labels = {});
AdjacencyMatrix AdjacencyFromJson(const Json& j,
                                  std::vector<std::string>* labels = nullptr);

// Header row of label names, then one row of values per label.
void WriteAdjacencyCsv(const AdjacencyMatrix& a,
                       const std::vector<std::string>& labels, std::ostream& out);

// {"k", "h", "d_h", "subgraphs": [{"heads": [{"wq", "wk", "wv"}], "wo"}]}
Json GatLayerToJson(const GatLayerParams& params);
GatLayerParams GatLayerFromJson(const Json& j);

// Everything read from a training config file.
struct RunConfig {
  TrainConfig train;
  ModelConfig model;
  CorrPipelineConfig corr;
  std::string mode = "corr";  // adjacency source: "corr" or "cooc"

  void Validate() const;
};

Json RunConfigToJson(const RunConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig RunConfigFromJson(const Json& j);

// {"n", "d_feat", "samples": [{"x": [...]} | {"fmap": {"d", "locs", "data"}},
//  "y": [...]]}. The feature map is channel-major: data[c * locs + l].
Json DatasetToJson(const Dataset& dataset);
Dataset DatasetFromJson(const Json& j);

// Parameters plus momentum, the config they were trained with, and the
// constant inputs (labels, Z, A) needed to evaluate them.
struct Checkpoint {
  RunConfig config;
  std::vector<std::string> labels;
  EmbeddingMatrix z;
  AdjacencyMatrix a;
  GatnParams params;
};

Json CheckpointToJson(const Checkpoint& checkpoint);
Checkpoint CheckpointFromJson(const Json& j);

// Report with every value in 6-decimal fixed notation.
std::string MetricsReportToJson(const MetricsReport& report);

// "epoch,loss" rows.
void WriteLossHistoryCsv(const std::vector<double>& history, std::ostream& out);

// File helpers; errors surface as kParse with the path in the message.
Json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);
std::string ReadTextFile(const std::string& path);

}  // namespace gatn

#endif  // GATN_SERIALIZE_H_
