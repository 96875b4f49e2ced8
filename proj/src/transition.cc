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

#include "emdp/transition.h"

#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace emdp {

TransitionMechanism::TransitionMechanism(MetricSpace space, Matrix channel,
                                         double alpha0)
    : space_(std::move(space)), channel_(std::move(channel)), alpha0_(alpha0) {
  cumulative_.resize(channel_.rows());
  for (size_t x = 0; x < channel_.rows(); ++x) {
    double acc = 0.0;
    cumulative_[x].reserve(channel_.cols());
    for (double p : channel_.row(x)) {
      acc += p;
      cumulative_[x].push_back(acc);
    }
  }
}

absl::StatusOr<TransitionMechanism> TransitionMechanism::Create(
    MetricSpace space, Matrix channel, double alpha0) {
  if (channel.rows() != space.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "channel has %d rows for a %d-point space", channel.rows(),
        space.size()));
  }
  if (channel.cols() == 0) {
    return absl::InvalidArgumentError("channel has no outputs");
  }
  if (!(alpha0 >= 0.0)) {
    return absl::InvalidArgumentError("alpha0 must be nonnegative");
  }
  for (size_t x = 0; x < channel.rows(); ++x) {
    double total = 0.0;
    for (size_t y = 0; y < channel.cols(); ++y) {
      const double p = channel(x, y);
      if (!std::isfinite(p) || p < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrFormat("channel entry (%d,%d) = %g is invalid", x, y, p));
      }
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      return absl::InvalidArgumentError(
          absl::StrFormat("channel row %d sums to %.17g", x, total));
    }
  }
  for (size_t x = 0; x < channel.rows(); ++x) {
    for (size_t x2 = 0; x2 < channel.rows(); ++x2) {
      if (x == x2) continue;
      const double bound = std::exp(alpha0 * space.distance(x, x2));
      for (size_t y = 0; y < channel.cols(); ++y) {
        if (channel(x, y) >
            bound * channel(x2, y) * (1.0 + kCertificationTolerance)) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "channel is not %g-metric-DP: A[%d,%d]=%g exceeds "
              "exp(%g*%g)*A[%d,%d]=%g",
              alpha0, x, y, channel(x, y), alpha0, space.distance(x, x2), x2,
              y, bound * channel(x2, y)));
        }
      }
    }
  }
  return TransitionMechanism(std::move(space), std::move(channel), alpha0);
}

size_t TransitionMechanism::Sample(size_t x, RandomStream& rng) const {
  return rng.DiscreteFromCumulative(cumulative_[x]);
}

double CertifiedLevel(const MetricSpace& space, const Matrix& channel) {
  double level = 0.0;
  for (size_t x = 0; x < channel.rows(); ++x) {
    for (size_t x2 = 0; x2 < channel.rows(); ++x2) {
      if (x == x2) continue;
      const double d = space.distance(x, x2);
      for (size_t y = 0; y < channel.cols(); ++y) {
        const double p = channel(x, y);
        const double q = channel(x2, y);
        if (p <= q) continue;
        if (q == 0.0 || d == 0.0) {
          return std::numeric_limits<double>::infinity();
        }
        level = std::max(level, std::log(p / q) / d);
      }
    }
  }
  return level;
}

}  // namespace emdp
