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

#ifndef GATN_METRICS_H_
#define GATN_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "gatn/matrix.h"

namespace gatn {

// Multi-label evaluation summary. Per-class AP is empty for classes without
// positive samples; those classes do not enter the mean.
struct MetricsReport {
  double mean_ap = 0.0;
  std::vector<std::optional<double>> per_class_ap;
  double class_precision = 0.0;  // CP
  double class_recall = 0.0;     // CR
  double class_f1 = 0.0;         // CF1
  double overall_precision = 0.0;  // OP
  double overall_recall = 0.0;     // OR
  double overall_f1 = 0.0;         // OF1
};

// How scores become hard predictions for the precision/recall family.
struct DecisionRule {
  enum class Kind { kThreshold, kTopK };
  Kind kind = Kind::kThreshold;
  double threshold = 0.5;  // on the sigmoid probability
  std::size_t top_k = 3;

  static DecisionRule Threshold(double t) { return {Kind::kThreshold, t, 3}; }
  static DecisionRule TopK(std::size_t k) { return {Kind::kTopK, 0.5, k}; }
};

// Non-interpolated AP: mean of precision@rank over the positive ranks, after
// a stable sort by descending score. nullopt when there is no positive.
std::optional<double> AveragePrecision(std::span<const double> scores,
                                       std::span<const double> labels);

// `logits` and `labels` are samples x classes.
MetricsReport Evaluate(const Matrix& logits, const Matrix& labels,
                       const DecisionRule& rule = {});

// 2pr / (p + r), or 0 when p + r == 0.
double HarmonicF1(double precision, double recall);

}  // namespace gatn

#endif  // GATN_METRICS_H_
