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

#include "gatn/cli.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "gatn/serialize.h"

namespace gatn {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "gatn");
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("gatn_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  void Write(const std::string& name, const std::string& text) const {
    WriteTextFile(Path(name), text);
  }
  // Synthetic labels, embeddings and dataset in dir_/data.
  void Synth(const std::string& seed = "42") const {
    ASSERT_EQ(RunCli({"synth", "--seed", seed, "--out", Path("data")}).code, 0);
  }
  // Small model so that training stays quick.
  void SmallConfig(const std::string& extra = "") const {
    Write("config.json", R"({"epochs": 5, "h": 2, "gcn_hidden": [16], "batch_size": 16)" +
                             extra + "}");
  }

  fs::path dir_;
};

TEST_F(CliTest, NoSubcommandIsUsageError) {
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  EXPECT_EQ(RunCli({"gradcheck", "--bogus", "1"}).code, cli::kExitUsage);
}

TEST_F(CliTest, MissingRequiredFlag) {
  const Outcome o = RunCli({"build-corr", "--labels", Path("l.txt")});
  EXPECT_EQ(o.code, cli::kExitUsage);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const Outcome o = RunCli({"train", "--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("--dataset"), std::string::npos);
}

TEST_F(CliTest, BuildCorrSmoke) {
  Write("labels.txt", "cat\ndog\n");
  Write("emb.txt", "cat 1 0\ndog 1 1\n");
  const Outcome o = RunCli({"build-corr", "--labels", Path("labels.txt"), "--embeddings",
                            Path("emb.txt"), "--out", Path("a.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::vector<std::string> labels;
  const AdjacencyMatrix a = AdjacencyFromJson(ReadJsonFile(Path("a.json")), &labels);
  EXPECT_EQ(a.n(), 2u);
  EXPECT_EQ(a.stage, Stage::kReweighted);
  EXPECT_EQ(labels, (std::vector<std::string>{"cat", "dog"}));
  EXPECT_NEAR(a.a(0, 1), 0.2, 1e-12);
  EXPECT_NEAR(a.a(0, 0), 0.8, 1e-12);
}

TEST_F(CliTest, BuildCorrCsv) {
  Write("labels.txt", "cat\ndog\n");
  Write("emb.txt", "cat 1 0\ndog 1 1\n");
  ASSERT_EQ(RunCli({"build-corr", "--labels", Path("labels.txt"), "--embeddings",
                    Path("emb.txt"), "--out", Path("a.csv")})
                .code,
            0);
  EXPECT_EQ(ReadTextFile(Path("a.csv")).rfind("cat,dog\n", 0), 0u);
}

TEST_F(CliTest, MissingTokenNamesTheToken) {
  Write("labels.txt", "cat\ntraffic light\n");
  Write("emb.txt", "cat 1 0\ntraffic 0 1\n");
  const Outcome o = RunCli({"build-corr", "--labels", Path("labels.txt"), "--embeddings",
                            Path("emb.txt"), "--out", Path("a.json")});
  EXPECT_EQ(o.code, cli::kExitData);
  EXPECT_EQ(o.err.rfind("error[missing-token]:", 0), 0u) << o.err;
  EXPECT_NE(o.err.find("light"), std::string::npos);
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(Path("a.json")));
}

TEST_F(CliTest, UnreadableInputIsDataError) {
  const Outcome o = RunCli({"build-corr", "--labels", Path("nope.txt"), "--embeddings",
                            Path("nope2.txt"), "--out", Path("a.json")});
  EXPECT_EQ(o.code, cli::kExitData);
  EXPECT_EQ(o.err.rfind("error[parse]:", 0), 0u);
}

TEST_F(CliTest, CooccurrenceMode) {
  Write("labels.txt", "a\nb\n");
  Write("emb.txt", "a 1 0\nb 0 1\n");
  Write("samples.json",
        R"({"n": 2, "d_feat": 1, "samples": [{"x": [0], "y": [1, 1]}, {"x": [0], "y": [1, 0]}]})");
  const Outcome o = RunCli({"build-corr", "--labels", Path("labels.txt"), "--embeddings",
                            Path("emb.txt"), "--samples", Path("samples.json"), "--mode",
                            "cooc", "--tau", "0.4", "--out", Path("a.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const AdjacencyMatrix a = AdjacencyFromJson(ReadJsonFile(Path("a.json")));
  // P(b|a) = 0.5 and P(a|b) = 1, both above 0.4: every row keeps p off the
  // diagonal.
  EXPECT_NEAR(a.a(0, 1), 0.2, 1e-12);
  EXPECT_NEAR(a.a(1, 0), 0.2, 1e-12);
  // Cosine of orthogonal vectors would give no edge at all.
  EXPECT_EQ(RunCli({"build-corr", "--labels", Path("labels.txt"), "--embeddings",
                    Path("emb.txt"), "--out", Path("b.json")})
                .code,
            0);
  EXPECT_EQ(AdjacencyFromJson(ReadJsonFile(Path("b.json"))).a(0, 1), 0.0);
}

TEST_F(CliTest, CooccurrenceWithoutSamplesIsUsageError) {
  Write("labels.txt", "a\n");
  Write("emb.txt", "a 1\n");
  EXPECT_EQ(RunCli({"build-corr", "--labels", Path("labels.txt"), "--embeddings",
                    Path("emb.txt"), "--mode", "cooc", "--out", Path("a.json")})
                .code,
            cli::kExitUsage);
}

TEST_F(CliTest, ExportDot) {
  Write("a.json", AdjacencyToJson({Matrix{{1, 0.3, 0}, {0, 1, 0.1}, {0, 0, 1}},
                                   Stage::kReweighted},
                                  {"x", "y", "z"})
                      .dump());
  const Outcome o = RunCli({"export-dot", "--adj", Path("a.json"), "--out", Path("g.dot")});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string dot = ReadTextFile(Path("g.dot"));
  EXPECT_NE(dot.find("n0 -- n1"), std::string::npos);
  EXPECT_EQ(dot.find("n1 -- n2"), std::string::npos);
  EXPECT_NE(dot.find("label=\"z\""), std::string::npos);
}

TEST_F(CliTest, ExportDotInvalidJson) {
  Write("a.json", "{not json");
  EXPECT_EQ(RunCli({"export-dot", "--adj", Path("a.json"), "--out", Path("g.dot")}).code,
            cli::kExitData);
}

TEST_F(CliTest, Gradcheck) {
  const Outcome o = RunCli({"gradcheck", "--seed", "2"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("max_rel_error="), std::string::npos);
}

TEST_F(CliTest, SynthTrainEvalIdempotent) {
  Synth();
  SmallConfig();
  const std::vector<std::string> train = {
      "train", "--config", Path("config.json"), "--dataset", Path("data/dataset.json"),
      "--labels", Path("data/labels.txt"), "--embeddings", Path("data/embeddings.txt"),
      "--out", Path("ckpt.json")};
  const Outcome o = RunCli(train);
  ASSERT_EQ(o.code, 0) << o.err;
  ASSERT_TRUE(fs::exists(Path("ckpt.loss.csv")));
  const std::string first = ReadTextFile(Path("ckpt.json"));
  const std::string first_loss = ReadTextFile(Path("ckpt.loss.csv"));
  ASSERT_EQ(RunCli(train).code, 0);
  EXPECT_EQ(ReadTextFile(Path("ckpt.json")), first);
  EXPECT_EQ(ReadTextFile(Path("ckpt.loss.csv")), first_loss);

  const Outcome e = RunCli({"eval", "--dataset", Path("data/dataset.json"), "--checkpoint",
                            Path("ckpt.json")});
  ASSERT_EQ(e.code, 0) << e.err;
  const Json report = Json::parse(e.out);
  for (const char* key : {"mAP", "CP", "CR", "CF1", "OP", "OR", "OF1"})
    EXPECT_TRUE(report.contains(key)) << key;
  EXPECT_EQ(report["per_class_AP"].size(), 6u);
}

TEST_F(CliTest, SeedFlagChangesTraining) {
  Synth();
  SmallConfig();
  auto train = [&](const std::string& seed, const std::string& out) {
    return RunCli({"train", "--config", Path("config.json"), "--dataset",
                   Path("data/dataset.json"), "--labels", Path("data/labels.txt"),
                   "--embeddings", Path("data/embeddings.txt"), "--seed", seed, "--out",
                   Path(out)})
        .code;
  };
  ASSERT_EQ(train("1", "a.json"), 0);
  ASSERT_EQ(train("2", "b.json"), 0);
  EXPECT_NE(ReadTextFile(Path("a.json")), ReadTextFile(Path("b.json")));
}

TEST_F(CliTest, TrainRejectsBadConfig) {
  Synth();
  Write("config.json", R"({"epochs": 0})");
  const Outcome o = RunCli({"train", "--config", Path("config.json"), "--dataset",
                            Path("data/dataset.json"), "--labels", Path("data/labels.txt"),
                            "--embeddings", Path("data/embeddings.txt"), "--out",
                            Path("ckpt.json")});
  EXPECT_EQ(o.code, cli::kExitData);
  EXPECT_FALSE(fs::exists(Path("ckpt.json")));
}

TEST_F(CliTest, EvalPerfectScores) {
  Write("d.json", R"({"n": 2, "d_feat": 1, "samples": [
      {"x": [0], "y": [1, 0]}, {"x": [0], "y": [0, 1]}, {"x": [0], "y": [1, 1]}]})");
  Write("s.json", R"({"logits": [[5, -5], [-5, 5], [5, 5]]})");
  const Outcome o = RunCli({"eval", "--dataset", Path("d.json"), "--scores", Path("s.json"),
                            "--out", Path("r.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json r = ReadJsonFile(Path("r.json"));
  for (const char* key : {"mAP", "CP", "CR", "CF1", "OP", "OR", "OF1"})
    EXPECT_EQ(r[key].get<double>(), 1.0) << key;
}

TEST_F(CliTest, EvalNeedsExactlyOneSource) {
  Write("d.json", R"({"n": 1, "d_feat": 1, "samples": [{"x": [0], "y": [1]}]})");
  EXPECT_EQ(RunCli({"eval", "--dataset", Path("d.json")}).code, cli::kExitUsage);
}

TEST_F(CliTest, AblateSchema) {
  SmallConfig();
  const Outcome o = RunCli({"ablate", "--config", Path("config.json"), "--out",
                            Path("ablate.csv")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream csv(ReadTextFile(Path("ablate.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "variant,mAP,CP,CR,CF1,OP,OR,OF1");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
  }
  EXPECT_EQ(rows, 4);
  const std::string first = ReadTextFile(Path("ablate.csv"));
  ASSERT_EQ(RunCli({"ablate", "--config", Path("config.json"), "--out", Path("ablate.csv")})
                .code,
            0);
  EXPECT_EQ(ReadTextFile(Path("ablate.csv")), first);
}

TEST_F(CliTest, AblatePartialFilesIsUsageError) {
  EXPECT_EQ(RunCli({"ablate", "--dataset", Path("d.json"), "--out", Path("a.csv")}).code,
            cli::kExitUsage);
}

}  // namespace
}  // namespace gatn
