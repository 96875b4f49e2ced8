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

// Unbounded to bounded reduction: every user's dataset is resampled with
// replacement to a fixed size s before a bounded mechanism runs, which
// hides dataset sizes. If the inner mechanism is (alpha, delta) bounded
// metric DP with
//
//   alpha = epsilon / ((1 + sqrt 2) r + (3 / s) ln(1 / delta)),
//
// the composite is (epsilon, 2 delta, r)-discrete metric DP.
//
// Resampling flattens per-user weights: a user holding many items and one
// holding few contribute equally after projection.

#ifndef EMDP_REDUCTION_H_
#define EMDP_REDUCTION_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "emdp/budget.h"
#include "emdp/random.h"
#include "emdp/transport.h"

namespace emdp {

// s i.i.d. draws from the normalized histogram of `data`, using a stream
// seeded with `seed`.
absl::StatusOr<Multiset> Project(const Multiset& data, int64_t s,
                                 uint64_t seed);

// Projects user i with substream (seed, i) and hands the n projected
// datasets, each of size exactly s, to `inner` once. `inner` must accept
// `const std::vector<Multiset>&` and return absl::StatusOr<T>.
template <typename Inner>
auto BoundedEmdReduction(std::span<const Multiset> users, int64_t s,
                         Inner&& inner, uint64_t seed)
    -> decltype(inner(std::declval<const std::vector<Multiset>&>())) {
  if (users.empty()) return absl::InvalidArgumentError("no users given");
  std::vector<Multiset> projected;
  projected.reserve(users.size());
  for (size_t i = 0; i < users.size(); ++i) {
    absl::StatusOr<Multiset> p =
        Project(users[i], s, MixSeed(seed ^ MixSeed(i + 1)));
    if (!p.ok()) return p.status();
    projected.push_back(*std::move(p));
  }
  return inner(projected);
}

// The (alpha, delta) the inner mechanism needs for an (epsilon, 2 delta, r)
// composite.
absl::StatusOr<MetricBudget> ReductionBudget(double epsilon, double delta,
                                             double r, int64_t s);

// (1 + sqrt 2) d + (3 / s) ln(1 / delta): with probability at least
// 1 - delta, coupled projections of two datasets at EMD d stay within this
// distance.
double ProjectionDistanceBound(double emd, int64_t s, double delta);

}  // namespace emdp

#endif  // EMDP_REDUCTION_H_
