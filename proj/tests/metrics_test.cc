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
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gatn/random.h"
#include "oracle/naive.h"

namespace gatn {
namespace {

double Logit(double p) { return std::log(p / (1.0 - p)); }

// Two classes, three samples, scores given as probabilities.
void HandExample(Matrix& logits, Matrix& labels) {
  const double p[3][2] = {{0.9, 0.8}, {0.2, 0.6}, {0.7, 0.1}};
  logits = Matrix(3, 2);
  for (int s = 0; s < 3; ++s)
    for (int c = 0; c < 2; ++c) logits(s, c) = Logit(p[s][c]);
  labels = Matrix{{1, 0}, {0, 1}, {1, 1}};
}

TEST(AveragePrecisionTest, Examples) {
  const std::vector<double> s = {0.9, 0.2, 0.7}, y = {1, 0, 1};
  EXPECT_EQ(AveragePrecision(s, y), 1.0);
  const std::vector<double> s2 = {0.8, 0.6, 0.1}, y2 = {0, 1, 1};
  EXPECT_NEAR(*AveragePrecision(s2, y2), 7.0 / 12.0, 1e-15);
  const std::vector<double> s3 = {0.1, 0.4, 0.35, 0.8}, y3 = {0, 0, 1, 1};
  EXPECT_NEAR(*AveragePrecision(s3, y3), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
}

TEST(AveragePrecisionTest, NoPositives) {
  const std::vector<double> s = {0.3, 0.2}, y = {0, 0};
  EXPECT_FALSE(AveragePrecision(s, y).has_value());
}

TEST(AveragePrecisionTest, TiesKeepInputOrder) {
  const std::vector<double> s = {0.5, 0.5}, y = {0, 1};
  EXPECT_NEAR(*AveragePrecision(s, y), 0.5, 1e-15);
}

TEST(AveragePrecisionTest, MatchesCountingOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.Below(20);
    std::vector<double> s(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = rng.Uniform(-3.0, 3.0);
      y[i] = rng.Uniform() < 0.4 ? 1.0 : 0.0;
    }
    const auto ap = AveragePrecision(s, y);
    if (std::count(y.begin(), y.end(), 1.0) == 0) {
      EXPECT_FALSE(ap.has_value());
      continue;
    }
    ASSERT_TRUE(ap.has_value());
    EXPECT_NEAR(*ap, oracle::CountingAveragePrecision(s, y), 1e-12);
    EXPECT_GE(*ap, 0.0);
    EXPECT_LE(*ap, 1.0);
  }
}

TEST(EvaluateTest, HandExample) {
  Matrix logits, labels;
  HandExample(logits, labels);
  const MetricsReport r = Evaluate(logits, labels, DecisionRule::Threshold(0.5));
  ASSERT_EQ(r.per_class_ap.size(), 2u);
  EXPECT_EQ(*r.per_class_ap[0], 1.0);
  EXPECT_NEAR(*r.per_class_ap[1], 7.0 / 12.0, 1e-15);
  EXPECT_NEAR(r.mean_ap, 19.0 / 24.0, 1e-15);
  EXPECT_NEAR(r.class_precision, 0.75, 1e-15);
  EXPECT_NEAR(r.class_recall, 0.75, 1e-15);
  EXPECT_NEAR(r.class_f1, 0.75, 1e-15);
  EXPECT_NEAR(r.overall_precision, 0.75, 1e-15);
  EXPECT_NEAR(r.overall_recall, 0.75, 1e-15);
  EXPECT_NEAR(r.overall_f1, 0.75, 1e-15);
}

TEST(EvaluateTest, PerfectPredictor) {
  const Matrix labels{{1, 0, 1}, {0, 1, 0}, {1, 1, 0}};
  Matrix logits(3, 3);
  for (std::size_t i = 0; i < 9; ++i) logits.data()[i] = labels.data()[i] > 0 ? 4.0 : -4.0;
  const MetricsReport r = Evaluate(logits, labels);
  for (double v : {r.mean_ap, r.class_precision, r.class_recall, r.class_f1,
                   r.overall_precision, r.overall_recall, r.overall_f1})
    EXPECT_EQ(v, 1.0);
}

TEST(EvaluateTest, NoPredictionsGivesZeroPrecision) {
  const Matrix labels{{1, 0}, {0, 1}};
  const MetricsReport r = Evaluate(Matrix(2, 2, -5.0), labels);
  EXPECT_EQ(r.class_precision, 0.0);
  EXPECT_EQ(r.overall_precision, 0.0);
  EXPECT_EQ(r.overall_f1, 0.0);
  EXPECT_EQ(r.class_f1, 0.0);
}

TEST(EvaluateTest, ClassWithoutPositivesLeftOutOfMean) {
  const Matrix labels{{1, 0}, {0, 0}};
  const MetricsReport r = Evaluate(Matrix{{2, 1}, {1, 2}}, labels);
  EXPECT_FALSE(r.per_class_ap[1].has_value());
  EXPECT_EQ(r.mean_ap, 1.0);
}

TEST(EvaluateTest, TopK) {
  const Matrix logits{{3, 2, 1}, {-1, -2, -3}};
  const Matrix labels{{1, 0, 0}, {0, 1, 0}};
  const MetricsReport r = Evaluate(logits, labels, DecisionRule::TopK(1));
  // Sample 0 predicts class 0 (hit), sample 1 predicts class 0 (miss).
  EXPECT_NEAR(r.overall_precision, 0.5, 1e-15);
  EXPECT_NEAR(r.overall_recall, 0.5, 1e-15);
  EXPECT_NEAR(r.class_precision, 0.5 / 3.0, 1e-15);
  // Class 2 has no positives and counts as zero recall.
  EXPECT_NEAR(r.class_recall, 1.0 / 3.0, 1e-15);
}

TEST(EvaluateTest, Errors) {
  EXPECT_THROW(Evaluate(Matrix(2, 2), Matrix(2, 3)), Error);
  EXPECT_THROW(Evaluate(Matrix(1, 1), Matrix{{0.5}}), Error);
  EXPECT_THROW(Evaluate(Matrix(1, 1), Matrix{{1}}, DecisionRule::Threshold(1.0)), Error);
  EXPECT_THROW(Evaluate(Matrix(1, 1), Matrix{{1}}, DecisionRule::Threshold(0.0)), Error);
}

void RandomProblem(Rng& rng, Matrix& logits, Matrix& labels) {
  const std::size_t m = 2 + rng.Below(12), n = 1 + rng.Below(5);
  logits = Matrix(m, n);
  labels = Matrix(m, n);
  for (std::size_t i = 0; i < m * n; ++i) {
    logits.data()[i] = rng.Uniform(-3.0, 3.0);
    labels.data()[i] = rng.Uniform() < 0.4 ? 1.0 : 0.0;
  }
}

TEST(EvaluateTest, MeanApInvariantUnderMonotoneTransform) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix logits, labels;
    RandomProblem(rng, logits, labels);
    Matrix warped = logits;
    for (double& v : warped.data()) v = std::exp(v) * 2.0 - 1.0;
    const MetricsReport a = Evaluate(logits, labels);
    const MetricsReport b = Evaluate(warped, labels);
    EXPECT_EQ(a.mean_ap, b.mean_ap);
    double sum = 0.0;
    int count = 0;
    for (const auto& ap : a.per_class_ap) {
      if (!ap) continue;
      EXPECT_GE(*ap, 0.0);
      EXPECT_LE(*ap, 1.0);
      sum += *ap;
      ++count;
    }
    if (count > 0) {
      EXPECT_NEAR(a.mean_ap, sum / count, 1e-15);
    }
  }
}

TEST(EvaluateTest, InvariantUnderSamplePermutation) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix logits, labels;
    RandomProblem(rng, logits, labels);
    const std::size_t m = logits.rows(), n = logits.cols();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = m - 1; i > 0; --i) std::swap(perm[i], perm[rng.Below(i + 1)]);
    Matrix pl(m, n), py(m, n);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        pl(r, c) = logits(perm[r], c);
        py(r, c) = labels(perm[r], c);
      }
    const MetricsReport a = Evaluate(logits, labels);
    const MetricsReport b = Evaluate(pl, py);
    // Continuous scores have no ties, so the ranking is unchanged.
    EXPECT_NEAR(a.mean_ap, b.mean_ap, 1e-12);
    EXPECT_NEAR(a.class_f1, b.class_f1, 1e-12);
    EXPECT_NEAR(a.overall_f1, b.overall_f1, 1e-12);
    EXPECT_GE(a.overall_f1, 0.0);
    EXPECT_LE(a.overall_f1, 1.0);
  }
}

TEST(HarmonicF1Test, Values) {
  EXPECT_EQ(HarmonicF1(0.0, 0.0), 0.0);
  EXPECT_NEAR(HarmonicF1(0.5, 1.0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(HarmonicF1(1.0, 1.0), 1.0);
}

}  // namespace
}  // namespace gatn
