// Copyright 2026 The emdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMDP_MATRIX_H_
#define EMDP_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace emdp {

// Dense row-major matrix of doubles. Sizes in this library are small
// (domains of at most a few thousand points), so no blocking or expression
// templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix Identity(size_t n);
  // Builds from nested rows; all rows must have equal length.
  static absl::StatusOr<Matrix> FromRows(
      const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  double& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }

  Matrix Transpose() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// Row vector times matrix: v^T M.
std::vector<double> VecMat(std::span<const double> v, const Matrix& m);
// Matrix times column vector: M v.
std::vector<double> MatVec(const Matrix& m, std::span<const double> v);

// Largest absolute entrywise difference; matrices must have equal shape.
double MaxAbsDiff(const Matrix& a, const Matrix& b);

// ||M||_{1->2}: the largest Euclidean norm of a column.
double OperatorNorm1To2(const Matrix& m);

// ||M||_2: the largest singular value, by power iteration on M^T M to the
// given relative tolerance.
double SpectralNorm(const Matrix& m, double relative_tolerance = 1e-10);

// Solves A X = B for square nonsingular A by Gaussian elimination with
// partial pivoting.
absl::StatusOr<Matrix> Solve(const Matrix& a, const Matrix& b);

// Right inverse N of a full-row-rank A (A N = I), taken as the minimum-norm
// choice A^T (A A^T)^{-1}.
absl::StatusOr<Matrix> RightInverse(const Matrix& a);

double L1Norm(std::span<const double> v);
double L2Norm(std::span<const double> v);

}  // namespace emdp

#endif  // EMDP_MATRIX_H_
