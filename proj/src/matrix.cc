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

#include "gatn/matrix.h"

#include <algorithm>
#include <cmath>

namespace gatn {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kMissingToken: return "missing-token";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kNumeric: return "numeric";
  }
  return "unknown";
}

namespace {

[[noreturn]] void ShapeMismatch(const char* op, const Matrix& a,
                                const Matrix& b) {
  throw Error(ErrorKind::kShape, std::string(op) + ": incompatible shapes " +
                                     a.ShapeString() + " and " +
                                     b.ShapeString());
}

Matrix Checked(Matrix m, const char* where) {
  CheckFinite(m, where);
  return m;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) {
    throw Error(ErrorKind::kNumeric, "Matrix: non-finite fill value");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::kShape,
                "Matrix: data length " + std::to_string(data_.size()) +
                    " does not match shape " + ShapeString());
  }
  CheckFinite(*this, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorKind::kShape, "Matrix: ragged initializer list");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  CheckFinite(*this, "Matrix");
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::ShapeString() const {
  return "(" + std::to_string(rows_) + ", " + std::to_string(cols_) + ")";
}

void CheckFinite(const Matrix& m, const char* where) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNumeric,
                  std::string(where) + ": non-finite value in matrix " +
                      m.ShapeString());
    }
  }
}

Matrix Matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) ShapeMismatch("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return Checked(std::move(out), "matmul");
}

Matrix MatmulTN(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) ShapeMismatch("matmul_tn", a, b);
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto a_row = a.row(k);
    auto b_row = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      if (aki == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  return Checked(std::move(out), "matmul_tn");
}

Matrix MatmulNT(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) ShapeMismatch("matmul_nt", a, b);
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto a_row = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto b_row = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a_row[k] * b_row[k];
      out(i, j) = acc;
    }
  }
  return Checked(std::move(out), "matmul_nt");
}

Matrix Transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

Matrix Add(const Matrix& a, const Matrix& b) {
  if (!a.SameShape(b)) ShapeMismatch("add", a, b);
  Matrix out = a;
  AddScaledInPlace(out, b, 1.0);
  return out;
}

Matrix Subtract(const Matrix& a, const Matrix& b) {
  if (!a.SameShape(b)) ShapeMismatch("subtract", a, b);
  Matrix out = a;
  AddScaledInPlace(out, b, -1.0);
  return out;
}

Matrix Scale(const Matrix& m, double factor) {
  Matrix out = m;
  for (double& v : out.data()) v *= factor;
  return Checked(std::move(out), "scale");
}

void AddScaledInPlace(Matrix& a, const Matrix& b, double factor) {
  if (!a.SameShape(b)) ShapeMismatch("add_scaled", a, b);
  auto dst = a.data();
  auto src = b.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
  CheckFinite(a, "add_scaled");
}

Matrix ConcatCols(std::span<const Matrix> parts) {
  if (parts.empty()) return Matrix();
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const Matrix& p : parts) {
    if (p.rows() != rows) ShapeMismatch("concat_cols", parts.front(), p);
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const Matrix& p : parts) {
    for (std::size_t i = 0; i < rows; ++i)
      std::copy(p.row(i).begin(), p.row(i).end(), out.row(i).begin() + offset);
    offset += p.cols();
  }
  return out;
}

Matrix SliceCols(const Matrix& m, std::size_t begin, std::size_t count) {
  if (begin + count > m.cols()) {
    throw Error(ErrorKind::kShape, "slice_cols: range [" +
                                       std::to_string(begin) + ", " +
                                       std::to_string(begin + count) +
                                       ") exceeds " + m.ShapeString());
  }
  Matrix out(m.rows(), count);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto src = m.row(i).subspan(begin, count);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix RowSoftmax(const Matrix& m) {
  if (m.empty()) {
    throw Error(ErrorKind::kShape, "row_softmax: empty matrix");
  }
  CheckFinite(m, "row_softmax");
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto in = m.row(i);
    auto dst = out.row(i);
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      dst[j] = std::exp(in[j] - peak);
      total += dst[j];
    }
    for (double& v : dst) v /= total;
  }
  return out;
}

double StableSigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double LeakyRelu(double x, double slope) { return x >= 0.0 ? x : slope * x; }

Matrix LeakyRelu(const Matrix& m, double slope) {
  Matrix out = m;
  for (double& v : out.data()) v = LeakyRelu(v, slope);
  return out;
}

std::vector<double> MatVec(const Matrix& m, std::span<const double> v) {
  if (m.cols() != v.size()) {
    throw Error(ErrorKind::kShape, "matvec: matrix " + m.ShapeString() +
                                       " and vector of length " +
                                       std::to_string(v.size()));
  }
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * v[j];
    if (!std::isfinite(acc)) {
      throw Error(ErrorKind::kNumeric, "matvec: non-finite result");
    }
    out[i] = acc;
  }
  return out;
}

double MaxAbs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

double MaxAbsDiff(const Matrix& a, const Matrix& b) {
  if (!a.SameShape(b)) ShapeMismatch("max_abs_diff", a, b);
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
  return best;
}

}  // namespace gatn
