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

#ifndef EMDP_TRANSITION_H_
#define EMDP_TRANSITION_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/matrix.h"
#include "emdp/metric_space.h"
#include "emdp/random.h"

namespace emdp {

// Relative slack allowed when certifying A[x,y] <= exp(alpha0 d) A[x',y].
inline constexpr double kCertificationTolerance = 1e-12;

// A row-stochastic channel from the points of a metric space to a finite
// output alphabet, certified to satisfy alpha0-local metric DP.
class TransitionMechanism {
 public:
  // Validates shape, nonnegativity, unit row sums (1e-12) and the
  // certification inequality for every (x, x', y).
  static absl::StatusOr<TransitionMechanism> Create(MetricSpace space,
                                                    Matrix channel,
                                                    double alpha0);

  const MetricSpace& space() const { return space_; }
  const Matrix& channel() const { return channel_; }
  size_t input_size() const { return channel_.rows(); }
  size_t output_size() const { return channel_.cols(); }
  double alpha0() const { return alpha0_; }

  double probability(size_t x, size_t y) const { return channel_(x, y); }

  // Draws one output for input x.
  size_t Sample(size_t x, RandomStream& rng) const;

 private:
  TransitionMechanism(MetricSpace space, Matrix channel, double alpha0);

  MetricSpace space_;
  Matrix channel_;
  double alpha0_;
  // Per-row cumulative tables for sampling.
  std::vector<std::vector<double>> cumulative_;
};

// Smallest alpha for which the channel satisfies the certification
// inequality on `space`; +inf if some pair at distance 0 has different rows
// or an entry is zero while its counterpart is not.
double CertifiedLevel(const MetricSpace& space, const Matrix& channel);

}  // namespace emdp

#endif  // EMDP_TRANSITION_H_
