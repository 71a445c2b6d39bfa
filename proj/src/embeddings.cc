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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace gatn {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> SplitWhitespace(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void ParseFailure(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParse,
              "embedding file line " + std::to_string(line) + ": " + what);
}

}  // namespace

LabelVocabulary::LabelVocabulary(std::vector<std::string> labels) {
  std::set<std::string> seen;
  for (auto& raw : labels) {
    std::string label = Trim(raw);
    if (label.empty()) {
      throw Error(ErrorKind::kValidation, "label vocabulary: empty label");
    }
    if (!seen.insert(Lower(label)).second) {
      throw Error(ErrorKind::kValidation,
                  "label vocabulary: duplicate label '" + label + "'");
    }
    labels_.push_back(std::move(label));
  }
}

LabelVocabulary LabelVocabulary::Parse(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) labels.push_back(line);
  }
  return LabelVocabulary(std::move(labels));
}

const std::vector<double>* EmbeddingTable::Find(
    const std::string& token) const {
  auto it = entries.find(Lower(token));
  return it == entries.end() ? nullptr : &it->second;
}

EmbeddingTable ParseEmbeddingFile(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_dim = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitWhitespace(line);
    const std::size_t coeffs = fields.size() - 1;
    if (coeffs == 0) ParseFailure(line_no, "token without coefficients");
    if (!have_dim) {
      table.dim = coeffs;
      have_dim = true;
    } else if (coeffs != table.dim) {
      ParseFailure(line_no, "expected " + std::to_string(table.dim) +
                                " coefficients, found " +
                                std::to_string(coeffs));
    }
    std::vector<double> vec(coeffs);
    for (std::size_t k = 0; k < coeffs; ++k) {
      const std::string& f = fields[k + 1];
      const char* begin = f.data();
      const char* end = f.data() + f.size();
      if (*begin == '+') ++begin;
      auto [ptr, ec] = std::from_chars(begin, end, vec[k]);
      if (ec != std::errc() || ptr != end || !std::isfinite(vec[k])) {
        ParseFailure(line_no, "unparsable number '" + f + "'");
      }
    }
    std::string token = Lower(fields[0]);
    if (table.entries.emplace(token, std::move(vec)).second) {
      table.order.push_back(std::move(token));
    }
  }
  if (!have_dim) {
    throw Error(ErrorKind::kParse, "embedding file: no entries");
  }
  return table;
}

void WriteEmbeddingFile(const EmbeddingTable& table, std::ostream& out) {
  out << std::setprecision(17);
  for (const std::string& token : table.order) {
    out << token;
    for (double v : table.entries.at(token)) out << ' ' << v;
    out << '\n';
  }
}

std::vector<double> EmbedLabel(const std::string& label,
                               const EmbeddingTable& table) {
  const std::vector<std::string> tokens = SplitWhitespace(label);
  if (tokens.empty()) {
    throw Error(ErrorKind::kValidation, "embed_label: empty label");
  }
  std::vector<double> mean(table.dim, 0.0);
  for (const std::string& token : tokens) {
    const std::vector<double>* vec = table.Find(token);
    if (vec == nullptr) {
      throw Error(ErrorKind::kMissingToken,
                  "token '" + token + "' of label '" + label +
                      "' not found in embedding table");
    }
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += (*vec)[k];
  }
  for (double& v : mean) v /= static_cast<double>(tokens.size());
  return mean;
}

EmbeddingMatrix BuildEmbeddingMatrix(const LabelVocabulary& vocab,
                                     const EmbeddingTable& table) {
  Matrix z(vocab.size(), table.dim);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const std::vector<double> vec = EmbedLabel(vocab[i], table);
    double norm2 = 0.0;
    for (double v : vec) norm2 += v * v;
    if (norm2 == 0.0) {
      throw Error(ErrorKind::kDegenerate, "label '" + vocab[i] + "' (index " +
                                              std::to_string(i) +
                                              ") has a zero-norm embedding");
    }
    std::copy(vec.begin(), vec.end(), z.row(i).begin());
  }
  return EmbeddingMatrix{std::move(z)};
}

}  // namespace gatn
