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

#ifndef GATN_MATRIX_H_
#define GATN_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gatn/errors.h"

namespace gatn {

// Dense row-major matrix of doubles. Elements are always finite: the
// checked constructors and every free function below reject NaN/Inf.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  // "(rows, cols)", used in error messages.
  std::string ShapeString() const;

  bool SameShape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Throws kNumeric if any element of `m` is not finite.
void CheckFinite(const Matrix& m, const char* where);

Matrix Matmul(const Matrix& a, const Matrix& b);
// a^T * b and a * b^T without materializing the transpose.
Matrix MatmulTN(const Matrix& a, const Matrix& b);
Matrix MatmulNT(const Matrix& a, const Matrix& b);
Matrix Transpose(const Matrix& m);

Matrix Add(const Matrix& a, const Matrix& b);
Matrix Subtract(const Matrix& a, const Matrix& b);
Matrix Scale(const Matrix& m, double factor);
// a += factor * b
void AddScaledInPlace(Matrix& a, const Matrix& b, double factor);

// Concatenate along columns; all parts must have the same row count.
Matrix ConcatCols(std::span<const Matrix> parts);
// Copy of columns [begin, begin + count).
Matrix SliceCols(const Matrix& m, std::size_t begin, std::size_t count);

// Numerically stable row-wise softmax (per-row max subtraction).
Matrix RowSoftmax(const Matrix& m);

double StableSigmoid(double x);
// log(1 + e^x) without overflow.
double Softplus(double x);

double LeakyRelu(double x, double slope);
Matrix LeakyRelu(const Matrix& m, double slope);

// Matrix-vector product m * v.
std::vector<double> MatVec(const Matrix& m, std::span<const double> v);

double MaxAbs(const Matrix& m);
double MaxAbsDiff(const Matrix& a, const Matrix& b);

}  // namespace gatn

#endif  // GATN_MATRIX_H_
