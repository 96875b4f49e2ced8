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

#include "emdp/frequency.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "emdp/random.h"

namespace emdp {

absl::StatusOr<GkrrParams> GkrrParams::Create(int s, int t, double r,
                                              double alpha0) {
  if (s < 1 || t < 1) {
    return absl::InvalidArgumentError("GKRR needs s >= 1 and t >= 1");
  }
  if (!(r > 0.0 && r < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("GKRR needs r in (0, 1/2), got %g", r));
  }
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) {
    return absl::InvalidArgumentError("GKRR needs finite alpha0 >= 0");
  }
  GkrrParams p;
  p.s = s;
  p.t = t;
  p.r = r;
  p.alpha0 = alpha0;
  const double e_self = std::exp(alpha0);
  const double e_near = std::exp((1.0 - r) * alpha0);
  const double denom = e_self + (t - 1) * e_near + (s - 1) * t;
  p.a = (e_self - e_near) / denom;
  p.b = (e_near - 1.0) / denom;
  p.c = 1.0 / denom;
  const double gap = e_self - e_near;
  const double cluster_gap = e_self + (t - 1) * e_near - t;
  p.invertible = gap > 0.0 && cluster_gap > 0.0;
  if (p.invertible) {
    p.a_inv = denom / gap;
    p.b_inv = -(e_near - 1.0) * denom / (gap * cluster_gap);
    p.c_inv = -1.0 / cluster_gap;
  }
  return p;
}

Matrix KroneckerForm(int s, int t, double a, double b, double c) {
  const size_t k = static_cast<size_t>(s) * t;
  Matrix m(k, k, c);
  for (size_t x = 0; x < k; ++x) {
    const size_t cluster = x / t;
    for (size_t e = 0; e < static_cast<size_t>(t); ++e) {
      m(x, cluster * t + e) += b;
    }
    m(x, x) += a;
  }
  return m;
}

Matrix GkrrMatrix(const GkrrParams& p) {
  return KroneckerForm(p.s, p.t, p.a, p.b, p.c);
}

absl::StatusOr<TransitionMechanism> GkrrMechanism(const GkrrParams& p) {
  absl::StatusOr<MetricSpace> space = BuildClustered(p.s, p.t, p.r);
  if (!space.ok()) return space.status();
  return TransitionMechanism::Create(*std::move(space), GkrrMatrix(p),
                                     p.alpha0);
}

absl::StatusOr<Matrix> GkrrRightInverse(const GkrrParams& p) {
  if (!p.invertible) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "GKRR channel with alpha0=%g r=%g is singular", p.alpha0, p.r));
  }
  return KroneckerForm(p.s, p.t, p.a_inv, p.b_inv, p.c_inv);
}

absl::Status VerifyRightInverse(const Matrix& a, const Matrix& b,
                                double tolerance) {
  if (a.cols() != b.rows() || b.cols() != a.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "inverse has shape %dx%d for a %dx%d channel", b.rows(), b.cols(),
        a.rows(), a.cols()));
  }
  const double err = MaxAbsDiff(a * b, Matrix::Identity(a.rows()));
  if (!(err <= tolerance)) {
    return absl::FailedPreconditionError(
        absl::StrFormat("A B differs from I by %g", err));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> FreqEstLocal(
    std::span<const Multiset> users, const TransitionMechanism& mechanism,
    const Matrix& inverse, uint64_t seed) {
  if (users.empty()) return absl::InvalidArgumentError("no users given");
  if (absl::Status s = VerifyRightInverse(mechanism.channel(), inverse);
      !s.ok()) {
    return s;
  }
  const size_t outputs = mechanism.output_size();
  std::vector<double> v(outputs, 0.0);
  for (size_t u = 0; u < users.size(); ++u) {
    const Multiset& data = users[u];
    if (data.domain_size() != mechanism.input_size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("user %d does not match the channel", u));
    }
    if (data.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("user %d has no items", u));
    }
    const double weight = 1.0 / (static_cast<double>(data.size()) *
                                 static_cast<double>(users.size()));
    // Item i is the i-th occurrence in ascending point order.
    std::vector<int64_t> reports(outputs, 0);
    uint64_t i = 0;
    for (size_t x = 0; x < data.domain_size(); ++x) {
      for (int64_t c = 0; c < data.count(x); ++c, ++i) {
        RandomStream rng = RandomStream::Derive(seed, {u, i});
        ++reports[mechanism.Sample(x, rng)];
      }
    }
    for (size_t y = 0; y < outputs; ++y) {
      v[y] += weight * static_cast<double>(reports[y]);
    }
  }
  return VecMat(v, inverse);
}

absl::StatusOr<HadamardResponse> BuildHadamardResponse(int k, double eps0) {
  if (k < 1) return absl::InvalidArgumentError("Hadamard needs k >= 1");
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) {
    return absl::InvalidArgumentError("Hadamard needs finite eps0 >= 0");
  }
  const size_t order = std::bit_ceil(2 * static_cast<size_t>(k));
  const double e = std::exp(eps0);
  const double scale = (static_cast<double>(order) / 2.0) * (e + 1.0);
  Matrix channel(k, order);
  for (size_t x = 0; x < static_cast<size_t>(k); ++x) {
    for (size_t y = 0; y < order; ++y) {
      const bool plus = std::popcount((x + 1) & y) % 2 == 0;
      channel(x, y) = (plus ? e : 1.0) / scale;
    }
  }
  // A = (u J + v H) / scale with H the chosen Hadamard rows, which are
  // orthogonal to each other and to the all-ones row. So A A^T = (p J_k +
  // q I_k) with p = order u^2 / scale^2 and q = order v^2 / scale^2, whose
  // inverse is (I - p / (q + k p) J) / q. This stays accurate for tiny eps0,
  // where a numerical solve of A A^T would lose full rank.
  const double u = (e + 1.0) / 2.0;
  const double v = std::expm1(eps0) / 2.0;
  const double kd = static_cast<double>(k);
  const double p = static_cast<double>(order) * u * u / (scale * scale);
  const double q = static_cast<double>(order) * v * v / (scale * scale);
  if (!(q > 0.0)) {
    return absl::FailedPreconditionError(
        "Hadamard channel at eps0 = 0 has no right inverse");
  }
  const double off = -p / (q + kd * p) / q;
  Matrix inverse(order, k);
  for (size_t y = 0; y < order; ++y) {
    double column_sum = 0.0;
    for (size_t x = 0; x < static_cast<size_t>(k); ++x) {
      column_sum += channel(x, y);
    }
    for (size_t x = 0; x < static_cast<size_t>(k); ++x) {
      inverse(y, x) = channel(x, y) / q + off * column_sum;
    }
  }
  absl::StatusOr<TransitionMechanism> mechanism = TransitionMechanism::Create(
      MetricSpace::Discrete(k), std::move(channel), eps0);
  if (!mechanism.ok()) return mechanism.status();
  return HadamardResponse{*std::move(mechanism), std::move(inverse),
                          static_cast<int>(order)};
}

absl::StatusOr<double> HadamardItemBudget(double epsilon, int64_t m,
                                          double delta) {
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
  const double denom = static_cast<double>(m) *
                       std::log(static_cast<double>(m) / delta);
  return epsilon / std::sqrt(denom);
}

Histogram ClampToSimplex(std::span<const double> raw) {
  std::vector<double> mass(raw.size());
  double total = 0.0;
  for (size_t i = 0; i < raw.size(); ++i) {
    mass[i] = std::max(0.0, raw[i]);
    total += mass[i];
  }
  if (total > 0.0) {
    for (double& v : mass) v /= total;
  } else {
    std::fill(mass.begin(), mass.end(), 1.0 / static_cast<double>(raw.size()));
  }
  // Renormalization error is far below the histogram tolerance.
  return *Histogram::Create(std::move(mass));
}

absl::StatusOr<LaplaceEstimate> LaplaceFreqCentral(const Multiset& pooled,
                                                   int64_t n, double epsilon,
                                                   uint64_t seed) {
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  absl::StatusOr<Histogram> h = pooled.Normalize();
  if (!h.ok()) return h.status();
  const double scale = 1.0 / (static_cast<double>(n) * epsilon);
  RandomStream rng(seed);
  LaplaceEstimate est;
  est.raw = h->mass();
  for (double& v : est.raw) v += rng.Laplace(scale);
  est.normalized = ClampToSimplex(est.raw).mass();
  return est;
}

absl::StatusOr<double> EmdUpperClustered(std::span<const double> u,
                                         const ClusteredSpace& shape) {
  if (static_cast<int>(u.size()) != shape.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "vector has %d entries for a %d-point space", u.size(), shape.size()));
  }
  double total = 0.0;
  for (double v : u) total += v;
  if (std::fabs(total) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrFormat("difference vector sums to %g, expected 0", total));
  }
  double cross = 0.0;
  for (int b = 0; b < shape.s; ++b) {
    double cluster = 0.0;
    for (int c = 0; c < shape.t; ++c) cluster += u[shape.Index(b, c)];
    cross += std::fabs(cluster);
  }
  return shape.r * L1Norm(u) + cross;
}

Matrix ClusterSumMatrix(int s, int t) {
  Matrix p(static_cast<size_t>(s) * t, s);
  for (int b = 0; b < s; ++b) {
    for (int c = 0; c < t; ++c) p(b * t + c, b) = 1.0;
  }
  return p;
}

absl::StatusOr<FreqBound> FreqErrorBound(const Matrix& inverse,
                                         const ClusteredSpace& shape,
                                         double m, double n) {
  const size_t k = static_cast<size_t>(shape.size());
  if (inverse.cols() != k) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "inverse has %d columns for a %d-point space", inverse.cols(), k));
  }
  if (!(m > 0.0 && n > 0.0)) {
    return absl::InvalidArgumentError("m and n must be positive");
  }
  // ||M^T||_{1->2} is the largest row norm of M.
  const double norm_b = OperatorNorm1To2(inverse.Transpose());
  const double norm_pb =
      OperatorNorm1To2((inverse * ClusterSumMatrix(shape.s, shape.t)).Transpose());
  FreqBound bound;
  double term_b = norm_b * norm_b - 1.0;
  double term_pb = norm_pb * norm_pb - 1.0;
  // Rounding can put an exact 1 slightly below; only flag real violations.
  if (term_b < -1e-9 || term_pb < -1e-9) bound.degenerate = true;
  term_b = std::max(term_b, 0.0);
  term_pb = std::max(term_pb, 0.0);
  const double st = static_cast<double>(k);
  bound.value = shape.r * std::sqrt(st * term_b / (m * n)) +
                std::sqrt(shape.s * term_pb / (m * n));
  return bound;
}

absl::StatusOr<double> KrrUtilityBound(const GkrrParams& p, double m,
                                       double n) {
  if (!p.invertible) {
    return absl::FailedPreconditionError("GKRR channel is singular");
  }
  if (!(m > 0.0 && n > 0.0)) {
    return absl::InvalidArgumentError("m and n must be positive");
  }
  const double s = p.s;
  const double t = p.t;
  const double e_self = std::exp(p.alpha0);
  const double e_near = std::exp((1.0 - p.r) * p.alpha0);
  const double first = p.r * std::sqrt(s * t * t * t / (m * n)) *
                       (e_self + s) / (e_self - e_near);
  const double second = std::sqrt(s * s * t * t / (m * n)) *
                        std::sqrt(s + 2.0 * (e_self - 1.0)) /
                        (e_self + (t - 1.0) * e_near - t);
  return first + second;
}

}  // namespace emdp
