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

#ifndef GATN_EMBEDDINGS_H_
#define GATN_EMBEDDINGS_H_

#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gatn/matrix.h"

namespace gatn {

// Ordered, de-duplicated list of class names. Index order here is the class
// index order of every matrix in the system.
class LabelVocabulary {
 public:
  LabelVocabulary() = default;
  // Labels are trimmed and must be unique after lowercasing.
  explicit LabelVocabulary(std::vector<std::string> labels);

  // One label per line; blank lines are skipped.
  static LabelVocabulary Parse(std::istream& in);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }

 private:
  std::vector<std::string> labels_;
};

// Word vectors keyed by lowercased token.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> entries;
  // First-seen order, kept so that re-serialization is stable.
  std::vector<std::string> order;

  const std::vector<double>* Find(const std::string& token) const;
};

// Reads "<token> <c1> ... <cd>" lines. The dimension comes from the first
// line; later lines must match it. Duplicate tokens keep the first vector.
EmbeddingTable ParseEmbeddingFile(std::istream& in);

// Writes the table back in the same text format, 17 significant digits.
void WriteEmbeddingFile(const EmbeddingTable& table, std::ostream& out);

// Multi-token labels ("teddy bear") embed as the mean of their token vectors.
std::vector<double> EmbedLabel(const std::string& label,
                               const EmbeddingTable& table);

// Node representation matrix: one row per label, in vocabulary order.
struct EmbeddingMatrix {
  Matrix z;

  std::size_t num_labels() const { return z.rows(); }
  std::size_t dim() const { return z.cols(); }
};

EmbeddingMatrix BuildEmbeddingMatrix(const LabelVocabulary& vocab,
                                     const EmbeddingTable& table);

}  // namespace gatn

#endif  // GATN_EMBEDDINGS_H_
