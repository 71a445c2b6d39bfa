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

#ifndef GATN_GRAPH_EXPORT_H_
#define GATN_GRAPH_EXPORT_H_

#include <string>
#include <vector>

#include "gatn/corr.h"

namespace gatn {

inline constexpr double kDefaultEdgeThreshold = 0.25;

// Undirected relation graph in Graphviz DOT. Nodes appear in index order with
// weight = row sum of the matrix; an edge {i, j}, i < j, is drawn when
// max(A_ij, A_ji) >= edge_threshold, with penwidth proportional to that value.
// Self loops are never drawn. Missing labels fall back to the node index.
std::string ExportDot(const AdjacencyMatrix& a,
                      const std::vector<std::string>& labels,
                      double edge_threshold = kDefaultEdgeThreshold);

}  // namespace gatn

#endif  // GATN_GRAPH_EXPORT_H_
