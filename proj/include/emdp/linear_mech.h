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

// Linear queries q_f(K) = E_{x ~ K~}[f(x)] = F K~ and their release under
// metric DP with EMD.
//
// If f is l-Lipschitz from (X, d) to (R^d, ||.||), then q_f has EMD
// sensitivity at most l, so adding noise calibrated to l gives a metric-DP
// release. Two noise shapes are offered:
//
//   Gamma ball:  l * g * U with g ~ Gamma(d, omega) and U uniform on the unit
//                sphere of the chosen norm. With omega = 1/alpha this is
//                (alpha, 0) metric DP.
//   Gaussian:    i.i.d. coordinates of standard deviation
//                l * omega * sqrt(1.25 ln(1/delta)).
//
// In the central model the curator evaluates the query on the pooled data of
// n users and divides omega by n.

#ifndef EMDP_LINEAR_MECH_H_
#define EMDP_LINEAR_MECH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/budget.h"
#include "emdp/matrix.h"
#include "emdp/metric_space.h"
#include "emdp/random.h"
#include "emdp/transport.h"

namespace emdp {

// A linear query given by its d x k table F; column x holds f(x).
class LinearQuery {
 public:
  static absl::StatusOr<LinearQuery> Create(const MetricSpace& space,
                                            Matrix table);

  size_t dim() const { return table_.rows(); }
  size_t domain_size() const { return table_.cols(); }
  const Matrix& table() const { return table_; }

  // F K~.
  std::vector<double> Evaluate(const Histogram& h) const;
  absl::StatusOr<std::vector<double>> Evaluate(const Multiset& data) const;

 private:
  explicit LinearQuery(Matrix table) : table_(std::move(table)) {}
  Matrix table_;
};

// The exact Euclidean Lipschitz constant max ||f(x) - f(x')|| / d(x, x') over
// pairs at positive distance. Fails if two points at distance 0 have
// different columns.
absl::StatusOr<double> LipschitzConstant(const MetricSpace& space,
                                         const Matrix& table);

enum class NoiseKind { kGammaBall, kGaussian };
enum class BallNorm { kL2, kL1 };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kGammaBall;
  // Local scale; equal to 1/alpha for an (alpha, delta) release.
  double omega = 1.0;
  // Used by the Gaussian kind only.
  double delta = 0.0;
  // Declared Lipschitz constant l.
  double lipschitz = 1.0;
  BallNorm norm = BallNorm::kL2;
};

// omega = 1/alpha.
absl::StatusOr<NoiseSpec> NoiseForBudget(NoiseKind kind,
                                         const MetricBudget& budget,
                                         double lipschitz);

// Standard deviation of each Gaussian coordinate at scale `omega`.
double GaussianNoiseStd(double lipschitz, double omega, double delta);

// One noise vector of dimension `dim` at the effective scale `omega`.
std::vector<double> SampleNoise(const NoiseSpec& noise, double omega,
                                size_t dim, RandomStream& rng);

struct LinearReleaseOptions {
  TrustModel model = TrustModel::kLocal;
  // Number of users in the central model; `data` is then the pooled dataset.
  int64_t num_users = 1;
  // Skip checking the declared Lipschitz constant against the exact one.
  bool unchecked = false;
};

// Releases F K~ plus noise per `noise`.
absl::StatusOr<std::vector<double>> PrivEmdLinear(
    const MetricSpace& space, const LinearQuery& query, const Multiset& data,
    const NoiseSpec& noise, const LinearReleaseOptions& options,
    uint64_t seed);

// F Phi for a d x t table F and per-point embeddings Phi (t x k). Every row
// of F must have Euclidean norm at most 1.
absl::StatusOr<Matrix> ComposeEmbeddingQuery(const Matrix& f,
                                             const EmbeddingTable& embedding);

// F Phi K~.
absl::StatusOr<std::vector<double>> EmbeddingQuery(
    const Matrix& f, const EmbeddingTable& embedding, const Multiset& data);

// Lipschitz bound ||F||_2 * normalization for the composite query on the
// normalized embedding space.
double EmbeddingLipschitzBound(const Matrix& f, double normalization);

// User-level Gaussian baseline: F K~ plus Gaussian noise calibrated to
// replacement sensitivity 2 max_x ||f(x)||, at (epsilon, delta) for the local
// model or (epsilon n, delta) scaling in the central model.
absl::StatusOr<std::vector<double>> UserLevelGaussianBaseline(
    const LinearQuery& query, const Multiset& data, const UserBudget& budget,
    const LinearReleaseOptions& options, uint64_t seed);

// 2 max_x ||f(x)||_2.
double UserLevelSensitivity(const Matrix& table);

}  // namespace emdp

#endif  // EMDP_LINEAR_MECH_H_
