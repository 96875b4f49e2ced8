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

#include "emdp/matrix.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace emdp {

Matrix Matrix::Identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

absl::StatusOr<Matrix> Matrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  const size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d has %d entries, expected %d", i, rows[i].size(), cols));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::Transpose() const {
  Matrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t l = 0; l < a.cols(); ++l) {
      const double x = a(i, l);
      if (x == 0.0) continue;
      for (size_t j = 0; j < b.cols(); ++j) c(i, j) += x * b(l, j);
    }
  }
  return c;
}

std::vector<double> VecMat(std::span<const double> v, const Matrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0.0) continue;
    for (size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

std::vector<double> MatVec(const Matrix& m, std::span<const double> v) {
  std::vector<double> out(m.rows(), 0.0);
  for (size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double MaxAbsDiff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

double OperatorNorm1To2(const Matrix& m) {
  double best = 0.0;
  for (size_t j = 0; j < m.cols(); ++j) {
    double sq = 0.0;
    for (size_t i = 0; i < m.rows(); ++i) sq += m(i, j) * m(i, j);
    best = std::max(best, sq);
  }
  return std::sqrt(best);
}

double SpectralNorm(const Matrix& m, double relative_tolerance) {
  const size_t n = m.cols();
  if (n == 0 || m.rows() == 0) return 0.0;
  // Deterministic, generically non-degenerate start vector.
  std::vector<double> v(n);
  for (size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.37 * std::sin(1.0 + j);
  double norm = L2Norm(v);
  for (double& x : v) x /= norm;

  // sigma_k = ||M v_k|| for unit v_k is the square root of the Rayleigh
  // quotient of M^T M and increases monotonically to the top singular value.
  double sigma = 0.0;
  constexpr int kMaxIterations = 1000000;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::vector<double> mv = MatVec(m, v);
    const double next = L2Norm(mv);
    std::vector<double> w = VecMat(mv, m);  // M^T M v
    const double wn = L2Norm(w);
    if (wn == 0.0) return next;
    for (size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
    if (iter > 0 && next - sigma <= relative_tolerance * next * 1e-2) {
      return std::max(next, L2Norm(MatVec(m, v)));
    }
    sigma = next;
  }
  return std::max(sigma, L2Norm(MatVec(m, v)));
}

absl::StatusOr<Matrix> Solve(const Matrix& a, const Matrix& b) {
  const size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    return absl::InvalidArgumentError("Solve: shape mismatch");
  }
  Matrix lu = a;
  Matrix x = b;
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::fabs(v));
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t i = col + 1; i < n; ++i) {
      if (std::fabs(lu(i, col)) > std::fabs(lu(pivot, col))) pivot = i;
    }
    if (std::fabs(lu(pivot, col)) <= 1e-14 * std::max(scale, 1.0)) {
      return absl::FailedPreconditionError("Solve: matrix is singular");
    }
    if (pivot != col) {
      for (size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
      for (size_t j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(pivot, j));
    }
    for (size_t i = col + 1; i < n; ++i) {
      const double f = lu(i, col) / lu(col, col);
      if (f == 0.0) continue;
      for (size_t j = col; j < n; ++j) lu(i, j) -= f * lu(col, j);
      for (size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(col, j);
    }
  }
  for (size_t i = n; i-- > 0;) {
    for (size_t j = 0; j < x.cols(); ++j) {
      double acc = x(i, j);
      for (size_t l = i + 1; l < n; ++l) acc -= lu(i, l) * x(l, j);
      x(i, j) = acc / lu(i, i);
    }
  }
  return x;
}

absl::StatusOr<Matrix> RightInverse(const Matrix& a) {
  if (a.rows() > a.cols()) {
    return absl::InvalidArgumentError(
        "RightInverse: matrix has more rows than columns");
  }
  Matrix at = a.Transpose();
  absl::StatusOr<Matrix> gram_inv = Solve(a * at, Matrix::Identity(a.rows()));
  if (!gram_inv.ok()) {
    return absl::FailedPreconditionError(
        "RightInverse: matrix does not have full row rank");
  }
  return at * *gram_inv;
}

double L1Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double L2Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace emdp
