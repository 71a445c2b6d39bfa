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

#include "gatn/metrics.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace gatn {
namespace {

Matrix Predictions(const Matrix& logits, const DecisionRule& rule) {
  Matrix pred(logits.rows(), logits.cols());
  if (rule.kind == DecisionRule::Kind::kThreshold) {
    for (std::size_t i = 0; i < logits.size(); ++i)
      pred.data()[i] = StableSigmoid(logits.data()[i]) >= rule.threshold;
    return pred;
  }
  std::vector<std::size_t> idx(logits.cols());
  const std::size_t k = std::min(rule.top_k, logits.cols());
  for (std::size_t s = 0; s < logits.rows(); ++s) {
    auto row = logits.row(s);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return row[x] > row[y];
    });
    for (std::size_t r = 0; r < k; ++r) pred(s, idx[r]) = 1.0;
  }
  return pred;
}

double Ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

double HarmonicF1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

std::optional<double> AveragePrecision(std::span<const double> scores,
                                       std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::kShape, "average_precision: " +
                                       std::to_string(scores.size()) +
                                       " scores vs " +
                                       std::to_string(labels.size()) + " labels");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (labels[order[rank]] > 0.5) {
      hits += 1.0;
      sum += hits / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0.0) return std::nullopt;
  return sum / hits;
}

MetricsReport Evaluate(const Matrix& logits, const Matrix& labels,
                       const DecisionRule& rule) {
  if (!logits.SameShape(labels)) {
    throw Error(ErrorKind::kShape, "evaluate: scores " + logits.ShapeString() +
                                       " vs labels " + labels.ShapeString());
  }
  if (rule.kind == DecisionRule::Kind::kThreshold &&
      !(rule.threshold > 0.0 && rule.threshold < 1.0)) {
    throw Error(ErrorKind::kValidation, "evaluate: threshold must be in (0, 1)");
  }
  if (rule.kind == DecisionRule::Kind::kTopK && rule.top_k == 0) {
    throw Error(ErrorKind::kValidation, "evaluate: top-k must be >= 1");
  }
  for (double v : labels.data()) {
    if (v != 0.0 && v != 1.0) {
      throw Error(ErrorKind::kValidation, "evaluate: labels must be 0 or 1");
    }
  }

  const std::size_t samples = logits.rows();
  const std::size_t classes = logits.cols();
  const Matrix pred = Predictions(logits, rule);

  MetricsReport report;
  report.per_class_ap.resize(classes);
  double ap_sum = 0.0;
  std::size_t ap_count = 0;
  double tp_all = 0.0, fp_all = 0.0, fn_all = 0.0;
  double precision_sum = 0.0, recall_sum = 0.0;
  std::vector<double> scores(samples), truth(samples);
  for (std::size_t c = 0; c < classes; ++c) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      scores[s] = logits(s, c);
      truth[s] = labels(s, c);
      const bool predicted = pred(s, c) > 0.5;
      const bool positive = truth[s] > 0.5;
      tp += predicted && positive;
      fp += predicted && !positive;
      fn += !predicted && positive;
    }
    report.per_class_ap[c] = AveragePrecision(scores, truth);
    if (report.per_class_ap[c]) {
      ap_sum += *report.per_class_ap[c];
      ++ap_count;
    }
    precision_sum += Ratio(tp, tp + fp);
    recall_sum += Ratio(tp, tp + fn);
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
  }
  report.mean_ap = ap_count > 0 ? ap_sum / static_cast<double>(ap_count) : 0.0;
  if (classes > 0) {
    report.class_precision = precision_sum / static_cast<double>(classes);
    report.class_recall = recall_sum / static_cast<double>(classes);
  }
  report.class_f1 = HarmonicF1(report.class_precision, report.class_recall);
  report.overall_precision = Ratio(tp_all, tp_all + fp_all);
  report.overall_recall = Ratio(tp_all, tp_all + fn_all);
  report.overall_f1 = HarmonicF1(report.overall_precision, report.overall_recall);
  return report;
}

}  // namespace gatn
