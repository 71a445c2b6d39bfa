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

#include "gatn/graph_export.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gatn {
namespace {

constexpr double kPenWidthPerUnit = 8.0;

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string ExportDot(const AdjacencyMatrix& a,
                      const std::vector<std::string>& labels,
                      double edge_threshold) {
  const std::size_t n = a.n();
  if (a.a.cols() != n) {
    throw Error(ErrorKind::kShape,
                "export_dot: adjacency must be square, got " + a.a.ShapeString());
  }
  std::ostringstream out;
  out << "graph relations {\n";
  out << "  node [shape=circle, fixedsize=true];\n";

  std::vector<double> strength(n, 0.0);
  double strongest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : a.a.row(i)) strength[i] += v;
    strongest = std::max(strongest, std::abs(strength[i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = i < labels.size() ? labels[i] : std::to_string(i);
    const double size =
        0.3 + (strongest > 0.0 ? 0.9 * std::abs(strength[i]) / strongest : 0.0);
    out << "  n" << i << " [label=" << Quote(name)
        << ", weight=" << Quote(Num(strength[i]))
        << ", width=" << Quote(Num(size)) << "];\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = std::max(a.a(i, j), a.a(j, i));
      if (value < edge_threshold) continue;
      out << "  n" << i << " -- n" << j << " [relation=" << Quote(Num(value))
          << ", penwidth=" << Quote(Num(kPenWidthPerUnit * value)) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gatn
