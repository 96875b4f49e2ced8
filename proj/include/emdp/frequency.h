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

// Histogram estimation through a randomizing channel and its right inverse.
//
// Each item goes through a channel A (|X| x |Y|). The per-user report
// frequencies are averaged into v, and H~ = v B for a right inverse B
// (A B = I). Since E[v] = K~ A, the estimate is unbiased.
//
// Channels provided here:
//
//   GKRR      generalized k-randomized response on a clustered space s x t
//             with intra-cluster distance r. Point (b, c) reports itself with
//             weight e^alpha0, another point of its cluster with weight
//             e^{(1-r) alpha0}, and any point of another cluster with weight
//             1. A and its inverse both have the form
//             a I + (b I_s + c J_s) (x) J_t, with closed-form coefficients.
//   Hadamard  Hadamard response, an eps0-LDP channel used as the user-level
//             baseline.
//
// The central Laplace baseline perturbs the pooled histogram directly.

#ifndef EMDP_FREQUENCY_H_
#define EMDP_FREQUENCY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/matrix.h"
#include "emdp/metric_space.h"
#include "emdp/transition.h"
#include "emdp/transport.h"

namespace emdp {

struct GkrrParams {
  int s = 0;
  int t = 0;
  double r = 0.0;
  double alpha0 = 0.0;
  // Forward coefficients: A = a I + (b I_s + c J_s) (x) J_t.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  // Inverse coefficients, valid when `invertible`.
  double a_inv = 0.0;
  double b_inv = 0.0;
  double c_inv = 0.0;
  bool invertible = false;

  int size() const { return s * t; }
  // Channel probabilities of the three kinds of output.
  double self() const { return a + b + c; }
  double same_cluster() const { return b + c; }
  double cross_cluster() const { return c; }

  static absl::StatusOr<GkrrParams> Create(int s, int t, double r,
                                           double alpha0);
};

// The |X| x |X| matrix a I + (b I_s + c J_s) (x) J_t in cluster-major order.
Matrix KroneckerForm(int s, int t, double a, double b, double c);

Matrix GkrrMatrix(const GkrrParams& p);

// GKRR as a channel on BuildClustered(s, t, r), certified at alpha0.
absl::StatusOr<TransitionMechanism> GkrrMechanism(const GkrrParams& p);

// The closed-form inverse. Fails when alpha0 = 0 (the channel is singular).
absl::StatusOr<Matrix> GkrrRightInverse(const GkrrParams& p);

// Checks A B = I within `tolerance`.
absl::Status VerifyRightInverse(const Matrix& a, const Matrix& b,
                                double tolerance = 1e-9);

// Local estimator: users' items pass through the channel with substream
// (seed, user, item); returns the raw (possibly negative) estimate H~.
absl::StatusOr<std::vector<double>> FreqEstLocal(
    std::span<const Multiset> users, const TransitionMechanism& mechanism,
    const Matrix& inverse, uint64_t seed);

struct HadamardResponse {
  TransitionMechanism mechanism;
  Matrix inverse;
  // Order of the Hadamard matrix, equal to the output alphabet size.
  int order = 0;
};

// Rows 1..k of the Sylvester Hadamard matrix of order K, the smallest power
// of two >= 2k. Input x reports y with probability proportional to e^eps0
// when H[x+1][y] = +1 and to 1 otherwise. The channel is certified on the
// discrete metric; the inverse is the minimum-norm right inverse.
absl::StatusOr<HadamardResponse> BuildHadamardResponse(int k, double eps0);

// Per-item budget epsilon / sqrt(m ln(m / delta)) for a user-level
// (epsilon, delta) guarantee over m items.
absl::StatusOr<double> HadamardItemBudget(double epsilon, int64_t m,
                                          double delta);

struct LaplaceEstimate {
  std::vector<double> raw;
  std::vector<double> normalized;
};

// Pooled histogram plus Laplace(1 / (n eps)) per coordinate, then
// clamp-and-renormalize.
absl::StatusOr<LaplaceEstimate> LaplaceFreqCentral(const Multiset& pooled,
                                                   int64_t n, double epsilon,
                                                   uint64_t seed);

// Clamps negative coordinates to zero and rescales to sum 1. An all-zero
// result maps to the uniform histogram.
Histogram ClampToSimplex(std::span<const double> raw);

// r ||u||_1 + ||P^T u||_1 for a zero-sum u, where P sums each cluster. Upper
// bounds the EMD between two histograms differing by u.
absl::StatusOr<double> EmdUpperClustered(std::span<const double> u,
                                         const ClusteredSpace& shape);

// The st x s matrix I_s (x) 1_t.
Matrix ClusterSumMatrix(int s, int t);

struct FreqBound {
  double value = 0.0;
  // Set when a squared norm fell below 1, which no valid right inverse of a
  // stochastic channel produces; the offending term was clamped to 0.
  bool degenerate = false;
};

// r sqrt(st (||B^T||^2_{1->2} - 1) / (mn)) + sqrt(s (||P^T B^T||^2_{1->2} - 1)
// / (mn)) for a right inverse B of shape |Y| x |X|.
absl::StatusOr<FreqBound> FreqErrorBound(const Matrix& inverse,
                                         const ClusteredSpace& shape,
                                         double m, double n);

// Closed-form bound for the GKRR estimator.
absl::StatusOr<double> KrrUtilityBound(const GkrrParams& p, double m,
                                       double n);

}  // namespace emdp

#endif  // EMDP_FREQUENCY_H_
