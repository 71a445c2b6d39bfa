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

#include "gatn/embeddings.h"

#include <sstream>

#include <gtest/gtest.h>

#include "gatn/random.h"

namespace gatn {
namespace {

EmbeddingTable Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseEmbeddingFile(in);
}

TEST(ParseEmbeddingFileTest, ReadsTokensAndDimension) {
  const EmbeddingTable t = Parse("cat 1.0 0.0\ndog 0.0 1.0");
  EXPECT_EQ(t.dim, 2u);
  EXPECT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(*t.Find("cat"), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(*t.Find("DOG"), (std::vector<double>{0.0, 1.0}));
}

TEST(ParseEmbeddingFileTest, RaggedLineReportsLineNumber) {
  try {
    Parse("cat 1.0\ndog 1.0 2.0");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseEmbeddingFileTest, UnparsableNumberReportsLineNumber) {
  try {
    Parse("cat 1.0 2.0\ndog 1.0 x2\n");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseEmbeddingFileTest, EmptyStreamRejected) {
  EXPECT_THROW(Parse(""), Error);
  EXPECT_THROW(Parse("\n\n"), Error);
}

TEST(ParseEmbeddingFileTest, DuplicateKeepsFirst) {
  const EmbeddingTable t = Parse("cat 1.0 0.0\ncat 9.0 9.0");
  EXPECT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(*t.Find("cat"), (std::vector<double>{1.0, 0.0}));
}

TEST(ParseEmbeddingFileTest, WriteThenParseIsLossless) {
  Rng rng(5);
  EmbeddingTable t;
  t.dim = 4;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(4);
    for (double& x : v) x = rng.Normal() * std::pow(10.0, rng.Uniform(-8, 8));
    const std::string token = "tok" + std::to_string(i);
    t.entries.emplace(token, v);
    t.order.push_back(token);
  }
  std::ostringstream out;
  WriteEmbeddingFile(t, out);
  const EmbeddingTable back = Parse(out.str());
  EXPECT_EQ(back.order, t.order);
  EXPECT_EQ(back.entries, t.entries);
}

TEST(EmbedLabelTest, SingleAndMultiToken) {
  const EmbeddingTable t = Parse("cat 1 0\nteddy 2 0\nbear 0 2\n");
  EXPECT_EQ(EmbedLabel("cat", t), (std::vector<double>{1, 0}));
  EXPECT_EQ(EmbedLabel("teddy bear", t), (std::vector<double>{1, 1}));
}

TEST(EmbedLabelTest, MissingTokenIsNamed) {
  const EmbeddingTable t = Parse("capacitor 1 0\n");
  try {
    EmbedLabel("flux capacitor", t);
    FAIL() << "expected a missing-token error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingToken);
    EXPECT_NE(std::string(e.what()).find("'flux'"), std::string::npos);
  }
}

TEST(LabelVocabularyTest, RejectsCaseInsensitiveDuplicates) {
  EXPECT_THROW(LabelVocabulary({"Cat", " cat "}), Error);
  EXPECT_THROW(LabelVocabulary({"cat", ""}), Error);
  std::istringstream in("cat\n\n teddy bear \n");
  const LabelVocabulary v = LabelVocabulary::Parse(in);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], "teddy bear");
}

TEST(BuildEmbeddingMatrixTest, RowOrderFollowsVocabulary) {
  const EmbeddingTable t = Parse("cat 1.0 0.0\ndog 0.0 1.0");
  EXPECT_EQ(BuildEmbeddingMatrix(LabelVocabulary({"cat", "dog"}), t).z,
            (Matrix{{1, 0}, {0, 1}}));
  EXPECT_EQ(BuildEmbeddingMatrix(LabelVocabulary({"dog", "cat"}), t).z,
            (Matrix{{0, 1}, {1, 0}}));
}

TEST(BuildEmbeddingMatrixTest, ZeroVectorIsDegenerate) {
  const EmbeddingTable t = Parse("cat 1.0 0.0\nvoid 0.0 0.0");
  try {
    BuildEmbeddingMatrix(LabelVocabulary({"cat", "void"}), t);
    FAIL() << "expected a degenerate-embedding error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
  }
}

TEST(BuildEmbeddingMatrixTest, PermutationProperty) {
  Rng rng(9);
  EmbeddingTable t;
  t.dim = 3;
  std::vector<std::string> names;
  for (int i = 0; i < 8; ++i) {
    names.push_back("w" + std::to_string(i));
    t.entries[names.back()] = {rng.Normal(), rng.Normal(), rng.Normal()};
  }
  const Matrix base = BuildEmbeddingMatrix(LabelVocabulary(names), t).z;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> perm(names.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.Below(i)]);
    std::vector<std::string> shuffled;
    for (std::size_t i : perm) shuffled.push_back(names[i]);
    const Matrix z = BuildEmbeddingMatrix(LabelVocabulary(shuffled), t).z;
    for (std::size_t r = 0; r < perm.size(); ++r)
      for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(z(r, c), base(perm[r], c));
  }
}

}  // namespace
}  // namespace gatn
