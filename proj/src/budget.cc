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

#include "emdp/budget.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace emdp {
namespace {

absl::Status CheckDelta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1), got %g", delta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<MetricBudget> MetricBudget::Create(double alpha, double delta) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must be a finite nonnegative number, got %g",
                        alpha));
  }
  if (absl::Status s = CheckDelta(delta); !s.ok()) return s;
  return MetricBudget{alpha, delta};
}

absl::StatusOr<UserBudget> UserBudget::Create(double epsilon, double delta) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be a finite nonnegative number, got %g",
                        epsilon));
  }
  if (absl::Status s = CheckDelta(delta); !s.ok()) return s;
  return UserBudget{epsilon, delta};
}

absl::StatusOr<DiscreteBudget> DiscreteBudget::Create(double epsilon,
                                                      double delta, double r) {
  absl::StatusOr<UserBudget> base = UserBudget::Create(epsilon, delta);
  if (!base.ok()) return base.status();
  if (!(r > 0.0 && r <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("radius r must lie in (0, 1], got %g", r));
  }
  return DiscreteBudget{epsilon, delta, r};
}

absl::StatusOr<double> AlphaFromRequirements(
    std::span<const Requirement> requirements) {
  if (requirements.empty()) {
    return absl::InvalidArgumentError("no requirements given");
  }
  double alpha = std::numeric_limits<double>::infinity();
  for (const Requirement& req : requirements) {
    if (!(req.q > 0.0 && req.q <= 1.0) || !(req.tau > 0.0 && req.tau <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "requirement needs q and tau in (0, 1], got q=%g tau=%g", req.q,
          req.tau));
    }
    if (!(req.epsilon_max > 0.0)) {
      return absl::InvalidArgumentError("requirement epsilon must be positive");
    }
    alpha = std::min(alpha, req.epsilon_max / (req.q * req.tau));
  }
  return alpha;
}

int64_t GroupSteps(double d, double r) {
  const double ratio = d / r;
  return static_cast<int64_t>(
      std::ceil(ratio - 1e-12 * std::max(1.0, ratio)));
}

absl::StatusOr<UserBudget> GroupPrivacy(const DiscreteBudget& budget, double d,
                                        GroupDelta mode) {
  if (!(d > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("distance must be positive, got %g", d));
  }
  const double steps = static_cast<double>(GroupSteps(d, budget.r));
  const double growth = mode == GroupDelta::kExpSteps
                            ? std::exp(steps)
                            : std::exp(budget.epsilon * steps);
  return UserBudget{budget.epsilon * steps, budget.delta * growth};
}

}  // namespace emdp
