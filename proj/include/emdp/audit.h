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

// Exact privacy audits for mechanisms with finite outputs.
//
// A mechanism M is (eps, delta)-indistinguishable on inputs (D, D') iff the
// hockey-stick divergence sum_o max(P(o) - e^eps Q(o), 0) of P = M(D) from
// Q = M(D') is at most delta. The audits below compute these laws exactly
// and check every ordered input pair, so they are only practical on tiny
// domains.

#ifndef EMDP_AUDIT_H_
#define EMDP_AUDIT_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/transition.h"
#include "emdp/transport.h"

namespace emdp {

// Slack added to every divergence comparison.
inline constexpr double kAuditTolerance = 1e-12;

// Largest |Y|^m the itemwise enumeration accepts.
inline constexpr double kMaxEnumeration = 1e6;

absl::StatusOr<double> HockeyStick(std::span<const double> p,
                                   std::span<const double> q, double eps);

// Law of the unordered itemwise output: report count vector -> probability.
using OutputLaw = std::map<std::vector<int64_t>, double>;

// Hockey-stick divergence between two laws; missing keys have mass 0.
double LawHockeyStick(const OutputLaw& p, const OutputLaw& q, double eps);

// Exact law of the shuffled itemwise release of `data` through `mechanism`.
absl::StatusOr<OutputLaw> ExactItemwiseDistribution(
    const Multiset& data, const TransitionMechanism& mechanism);

struct ItemAudit {
  bool pass = false;
  size_t x = 0;
  size_t x_prime = 0;
  // Largest divergence over ordered pairs and the pair attaining it.
  double divergence = 0.0;
  // divergence - delta.
  double slack = 0.0;
};

// Checks A[x,.] against A[x',.] at eps = alpha d(x, x') for all ordered
// pairs x != x'.
ItemAudit VerifyItemMetricDp(const TransitionMechanism& mechanism,
                             double alpha, double delta);

struct EmdAudit {
  bool pass = false;
  Multiset first;
  Multiset second;
  double emd = 0.0;
  double divergence = 0.0;
  // Largest divergence - delta over all pairs.
  double slack = 0.0;
  int64_t pairs_checked = 0;
};

// Checks the itemwise release at eps = alpha * EMD for every ordered pair of
// size-m multisets over the input space.
absl::StatusOr<EmdAudit> VerifyEmdDp(const TransitionMechanism& mechanism,
                                     int64_t m, double alpha, double delta);

// All multisets of size m over k points, in lexicographic count order.
std::vector<Multiset> EnumerateMultisets(size_t k, int64_t m);

}  // namespace emdp

#endif  // EMDP_AUDIT_H_
