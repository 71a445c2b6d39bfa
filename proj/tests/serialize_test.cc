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

#include "gatn/serialize.h"

#include <sstream>

#include <gtest/gtest.h>

#include "gatn/synth.h"

namespace gatn {
namespace {

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kNumeric;
}

TEST(MatrixJsonTest, RoundTripIsExact) {
  const Matrix m{{0.1, -1.0 / 3.0, 1e-300}, {2.5e10, 0.0, -7.0}};
  const Matrix back = MatrixFromJson(Json::parse(MatrixToJson(m).dump()));
  EXPECT_EQ(back, m);
}

TEST(MatrixJsonTest, Malformed) {
  EXPECT_EQ(KindOf([] { MatrixFromJson(Json::parse(R"({"rows":2,"cols":1,"data":[[1]]})")); }),
            ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { MatrixFromJson(Json::parse(R"({"rows":1,"cols":2,"data":[[1,"x"]]})")); }),
            ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { MatrixFromJson(Json::parse("[1, 2]")); }), ErrorKind::kParse);
}

TEST(AdjacencyJsonTest, RoundTripWithLabels) {
  const AdjacencyMatrix a{Matrix{{1, 0.5}, {0.25, 1}}, Stage::kReweighted};
  const Json j = AdjacencyToJson(a, {"cat", "dog"});
  EXPECT_EQ(j.at("stage"), "A");
  EXPECT_EQ(j.at("n"), 2);
  std::vector<std::string> labels;
  const AdjacencyMatrix back = AdjacencyFromJson(Json::parse(j.dump()), &labels);
  EXPECT_EQ(back.a, a.a);
  EXPECT_EQ(back.stage, Stage::kReweighted);
  EXPECT_EQ(labels, (std::vector<std::string>{"cat", "dog"}));
}

TEST(AdjacencyJsonTest, BadStage) {
  const Json j = Json::parse(R"({"n":1,"stage":"Q","data":[[1]]})");
  EXPECT_EQ(KindOf([&] { AdjacencyFromJson(j); }), ErrorKind::kParse);
}

TEST(AdjacencyCsvTest, HeaderThenRows) {
  std::ostringstream out;
  WriteAdjacencyCsv({Matrix{{1, 0.5}, {0.5, 1}}, Stage::kSimilarity}, {"a", "b"}, out);
  EXPECT_EQ(out.str(), "a,b\n1,0.5\n0.5,1\n");
}

TEST(GatLayerJsonTest, RoundTrip) {
  Rng rng(3);
  const GatLayerParams p = InitGatLayer(4, 2, 3, 5, rng);
  const Json j = GatLayerToJson(p);
  EXPECT_EQ(j.at("k"), 2);
  EXPECT_EQ(j.at("h"), 3);
  EXPECT_EQ(j.at("d_h"), 5);
  const GatLayerParams back = GatLayerFromJson(Json::parse(j.dump()));
  ASSERT_EQ(back.num_subgraphs(), 2u);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(back.subgraphs[s].wo, p.subgraphs[s].wo);
    for (std::size_t h = 0; h < 3; ++h) {
      EXPECT_EQ(back.subgraphs[s].heads[h].wq, p.subgraphs[s].heads[h].wq);
      EXPECT_EQ(back.subgraphs[s].heads[h].wk, p.subgraphs[s].heads[h].wk);
      EXPECT_EQ(back.subgraphs[s].heads[h].wv, p.subgraphs[s].heads[h].wv);
    }
  }
}

TEST(RunConfigJsonTest, DefaultsAndOverrides) {
  const RunConfig c = RunConfigFromJson(Json::parse(
      R"({"lr": 0.1, "k": 3, "gcn_hidden": [8, 4], "mode": "cooc", "tau": 0.3})"));
  EXPECT_EQ(c.train.lr, 0.1);
  EXPECT_EQ(c.train.momentum, 0.9);
  EXPECT_EQ(c.model.num_subgraphs, 3u);
  EXPECT_EQ(c.model.gcn_hidden, (std::vector<std::size_t>{8, 4}));
  EXPECT_EQ(c.mode, "cooc");
  EXPECT_EQ(c.corr.tau, 0.3);
  EXPECT_EQ(c.corr.p, 0.2);
  const RunConfig back = RunConfigFromJson(RunConfigToJson(c));
  EXPECT_EQ(RunConfigToJson(back), RunConfigToJson(c));
}

TEST(RunConfigJsonTest, UnknownKeyRejected) {
  EXPECT_EQ(KindOf([] { RunConfigFromJson(Json::parse(R"({"learning_rate": 0.1})")); }),
            ErrorKind::kParse);
}

TEST(RunConfigJsonTest, BadModeRejected) {
  const RunConfig c = RunConfigFromJson(Json::parse(R"({"mode": "both"})"));
  EXPECT_EQ(KindOf([&] { c.Validate(); }), ErrorKind::kValidation);
}

TEST(DatasetJsonTest, RoundTripVectorsAndFeatureMaps) {
  Dataset d;
  d.num_labels = 2;
  d.feature_dim = 3;
  d.samples.push_back({std::vector<double>{1, 2, 3}, {1, 0}});
  d.samples.push_back({Matrix{{1, 2}, {3, 4}, {5, 6}}, {0, 1}});
  const Dataset back = DatasetFromJson(Json::parse(DatasetToJson(d).dump()));
  ASSERT_EQ(back.samples.size(), 2u);
  EXPECT_EQ(back.samples[0].Pooled(), (std::vector<double>{1, 2, 3}));
  ASSERT_TRUE(std::holds_alternative<Matrix>(back.samples[1].features));
  EXPECT_EQ(std::get<Matrix>(back.samples[1].features), (Matrix{{1, 2}, {3, 4}, {5, 6}}));
  EXPECT_EQ(back.samples[1].targets, (std::vector<double>{0, 1}));
  EXPECT_EQ(back.TargetMatrix(), (Matrix{{1, 0}, {0, 1}}));
}

TEST(DatasetJsonTest, WrongFeatureLength) {
  const Json j = Json::parse(R"({"n": 1, "d_feat": 2, "samples": [{"x": [1], "y": [1]}]})");
  EXPECT_THROW(DatasetFromJson(j), Error);
}

TEST(CheckpointJsonTest, RoundTripIsBitwise) {
  ToyProblem toy = GradcheckToy(9);
  // Non-zero momentum so that it is exercised too.
  const LossAndGradients g = Gradients(toy.params, toy.z, toy.a, toy.batch);
  SgdStep(toy.params, g.grads, TrainConfig{});
  Checkpoint c{RunConfig{}, {"a", "b", "c", "d", "e"}, toy.z, toy.a, toy.params};
  const std::string text = CheckpointToJson(c).dump();
  const Checkpoint back = CheckpointFromJson(Json::parse(text));
  EXPECT_EQ(CheckpointToJson(back).dump(), text);
  EXPECT_EQ(back.labels, c.labels);
  EXPECT_EQ(back.z.z, c.z.z);
  EXPECT_EQ(back.a.a, c.a.a);
  const auto t1 = back.params.Tensors();
  const auto t2 = c.params.Tensors();
  ASSERT_EQ(t1.size(), t2.size());
  for (std::size_t t = 0; t < t1.size(); ++t) EXPECT_EQ(*t1[t], *t2[t]);
  const auto m1 = back.params.momentum.Tensors();
  const auto m2 = c.params.momentum.Tensors();
  ASSERT_EQ(m1.size(), m2.size());
  for (std::size_t t = 0; t < m1.size(); ++t) EXPECT_EQ(*m1[t], *m2[t]);
}

TEST(CheckpointJsonTest, WrongFormatTag) {
  ToyProblem toy = GradcheckToy(1);
  Json j = CheckpointToJson({RunConfig{}, {"a", "b", "c", "d", "e"}, toy.z, toy.a, toy.params});
  j["format"] = "something-else";
  EXPECT_EQ(KindOf([&] { CheckpointFromJson(j); }), ErrorKind::kParse);
}

TEST(ReportJsonTest, FixedSixDecimals) {
  MetricsReport r;
  r.mean_ap = 19.0 / 24.0;
  r.class_f1 = 0.75;
  r.per_class_ap = {1.0, std::nullopt};
  const std::string s = MetricsReportToJson(r);
  EXPECT_NE(s.find("\"mAP\": 0.791667"), std::string::npos);
  EXPECT_NE(s.find("\"CF1\": 0.750000"), std::string::npos);
  EXPECT_NE(s.find("\"per_class_AP\": [1.000000, null]"), std::string::npos);
  EXPECT_NO_THROW(Json::parse(s));
}

TEST(LossHistoryCsvTest, Rows) {
  std::ostringstream out;
  WriteLossHistoryCsv({0.5, 0.25}, out);
  EXPECT_EQ(out.str(), "epoch,loss\n1,0.5\n2,0.25\n");
}

TEST(FileHelpersTest, MissingFile) {
  EXPECT_EQ(KindOf([] { ReadJsonFile("/nonexistent/dir/file.json"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ReadTextFile("/nonexistent/dir/file.txt"); }), ErrorKind::kParse);
}

}  // namespace
}  // namespace gatn
