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

// Item-wise release with shuffling, and the amplification analysis that
// turns a per-item alpha0 into a dataset-level metric-DP budget.
//
// For a release of `total` shuffled reports (m in the local model, m * n in
// the central model) in which one user's m items move, the group-privacy
// amplification bound is
//
//   h(total; x0, x1) = x0 * ln(1 + tanh(alpha0 x1 / (2 x0)) * C),
//   C = 8 sqrt(e^alpha0 ln(4 x0 / delta)) / sqrt(total) + 8 e^alpha0 / total,
//
// and the resulting budget is
//
//   alpha_eff = sup_{w in [0,1]} h(total; m, m w) / w,
//   delta_eff = delta * exp(h(total; m, m)).
//
// The bound is only valid while alpha0 < ln(total / (16 ln(4 total / delta))).

#ifndef EMDP_SHUFFLE_AMP_H_
#define EMDP_SHUFFLE_AMP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/budget.h"
#include "emdp/transition.h"
#include "emdp/transport.h"

namespace emdp {

// Applies the channel to each item independently and returns the reports in
// uniformly random order. Item i uses the substream (seed, i); the shuffle
// uses its own substream.
absl::StatusOr<std::vector<size_t>> PrivEmdItemwise(
    const Multiset& data, const TransitionMechanism& mechanism, uint64_t seed);

// ln(total / (16 ln(4 total / delta))): the supremum of admissible alpha0.
double ApplicabilityLimit(double total, double delta);

struct AmplificationOptions {
  // When false the applicability condition on alpha0 is not checked and the
  // formula is evaluated as is. Used by exact audits on tiny domains, where
  // the condition can never hold.
  bool enforce_applicability = true;
  // Grid resolution for the supremum over w before golden-section refinement.
  int grid_points = 10000;
};

absl::StatusOr<double> HBound(double total, double x0, double x1,
                              double alpha0, double delta,
                              const AmplificationOptions& options = {});

// Limit of h(total; m, m w) / w as w -> 0.
double HBoundSlopeAtZero(double total, double m, double alpha0, double delta);

struct AmplificationResult {
  double alpha_eff = 0.0;
  double delta_eff = 0.0;
  double w_star = 0.0;
  // delta_eff >= 1: the guarantee is vacuous. Reported, not clamped.
  bool vacuous_delta = false;
  std::string warning;
};

absl::StatusOr<AmplificationResult> EffectiveBudget(
    double alpha0, double delta, int64_t m, int64_t n, TrustModel model,
    const AmplificationOptions& options = {});

enum class CalibrationMode { kExact, kAsymptotic };

// The per-item alpha0 achieving `target`. Exact mode bisects EffectiveBudget
// for the largest alpha0 with alpha_eff <= target.alpha; asymptotic mode
// evaluates the two-branch closed form.
absl::StatusOr<double> CalibrateAlpha0(const MetricBudget& target, int64_t m,
                                       int64_t n, TrustModel model,
                                       CalibrationMode mode);

// m * alpha0, the pure composition bound without shuffling.
double CompositionBaseline(double alpha0, int64_t m);

}  // namespace emdp

#endif  // EMDP_SHUFFLE_AMP_H_
