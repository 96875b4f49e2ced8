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

// Privacy budget types and budget arithmetic.
//
//   MetricBudget    (alpha, delta): alpha is in units of inverse EMD.
//   UserBudget      (epsilon, delta): ordinary user-level DP.
//   DiscreteBudget  (epsilon, delta, r): a uniform guarantee for every change
//                   of EMD at most r.

#ifndef EMDP_BUDGET_H_
#define EMDP_BUDGET_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"

namespace emdp {

struct MetricBudget {
  double alpha = 0.0;
  double delta = 0.0;

  // alpha >= 0 and finite, delta in [0, 1).
  static absl::StatusOr<MetricBudget> Create(double alpha, double delta);
};

struct UserBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  static absl::StatusOr<UserBudget> Create(double epsilon, double delta);
};

struct DiscreteBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  double r = 1.0;

  // epsilon >= 0, delta in [0, 1), r in (0, 1].
  static absl::StatusOr<DiscreteBudget> Create(double epsilon, double delta,
                                               double r);
};

// "A change of average distance q to a fraction tau of the data must be
// protected at level epsilon_max."
struct Requirement {
  double q = 1.0;
  double tau = 1.0;
  double epsilon_max = 1.0;
};

// The largest alpha meeting every requirement: min of epsilon_max / (q tau).
absl::StatusOr<double> AlphaFromRequirements(
    std::span<const Requirement> requirements);

// Where the trusted party sits: each user randomizes locally, or a curator
// randomizes the pooled data of n users.
enum class TrustModel { kLocal, kCentral };

// How delta grows under group privacy. The default multiplies delta by
// exp(n) for n = ceil(d / r) steps; kEpsilonScaled uses exp(epsilon n).
enum class GroupDelta { kExpSteps, kEpsilonScaled };

// The (epsilon, delta) guarantee a discrete budget gives for a change of
// EMD d > 0, by chaining ceil(d / r) steps of size at most r.
absl::StatusOr<UserBudget> GroupPrivacy(const DiscreteBudget& budget, double d,
                                        GroupDelta mode = GroupDelta::kExpSteps);

// ceil(d / r), with a relative guard so that d = j * r in floating point
// counts as exactly j steps.
int64_t GroupSteps(double d, double r);

}  // namespace emdp

#endif  // EMDP_BUDGET_H_
