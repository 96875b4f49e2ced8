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

#include "emdp/reduction.h"

#include <cmath>

#include "absl/strings/str_format.h"

namespace emdp {

absl::StatusOr<Multiset> Project(const Multiset& data, int64_t s,
                                 uint64_t seed) {
  if (data.empty()) {
    return absl::InvalidArgumentError("cannot project an empty dataset");
  }
  if (s < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample size must be >= 1, got %d", s));
  }
  const size_t k = data.domain_size();
  std::vector<double> cumulative(k);
  double acc = 0.0;
  for (size_t x = 0; x < k; ++x) {
    acc += static_cast<double>(data.count(x));
    cumulative[x] = acc;
  }
  RandomStream rng(seed);
  Multiset out(std::vector<int64_t>(k, 0));
  for (int64_t i = 0; i < s; ++i) out.Add(rng.DiscreteFromCumulative(cumulative));
  return out;
}

absl::StatusOr<MetricBudget> ReductionBudget(double epsilon, double delta,
                                             double r, int64_t s) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(r > 0.0 && r <= 1.0)) {
    return absl::InvalidArgumentError("radius r must lie in (0, 1]");
  }
  if (s < 1) return absl::InvalidArgumentError("sample size must be >= 1");
  const double denom = (1.0 + std::sqrt(2.0)) * r +
                       3.0 / static_cast<double>(s) * std::log(1.0 / delta);
  return MetricBudget{epsilon / denom, delta};
}

double ProjectionDistanceBound(double emd, int64_t s, double delta) {
  return (1.0 + std::sqrt(2.0)) * emd +
         3.0 / static_cast<double>(s) * std::log(1.0 / delta);
}

}  // namespace emdp
