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

#include "emdp/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace emdp {

absl::StatusOr<double> HockeyStick(std::span<const double> p,
                                   std::span<const double> q, double eps) {
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distributions have %d and %d outcomes", p.size(), q.size()));
  }
  if (!(eps >= 0.0)) return absl::InvalidArgumentError("eps must be >= 0");
  const double scale = std::exp(eps);
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    total += std::max(p[i] - scale * q[i], 0.0);
  }
  return total;
}

double LawHockeyStick(const OutputLaw& p, const OutputLaw& q, double eps) {
  const double scale = std::exp(eps);
  double total = 0.0;
  for (const auto& [key, mass] : p) {
    auto it = q.find(key);
    const double other = it == q.end() ? 0.0 : it->second;
    total += std::max(mass - scale * other, 0.0);
  }
  return total;
}

absl::StatusOr<OutputLaw> ExactItemwiseDistribution(
    const Multiset& data, const TransitionMechanism& mechanism) {
  if (data.domain_size() != mechanism.input_size()) {
    return absl::InvalidArgumentError("dataset does not match the channel");
  }
  const size_t outputs = mechanism.output_size();
  const double work = std::pow(static_cast<double>(outputs),
                               static_cast<double>(data.size()));
  if (work > kMaxEnumeration) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "|Y|^m = %g exceeds the enumeration limit %g", work, kMaxEnumeration));
  }
  // Folding items in one at a time gives the same law as enumerating ordered
  // tuples and collapsing them, without materializing the tuples.
  OutputLaw law;
  law.emplace(std::vector<int64_t>(outputs, 0), 1.0);
  for (size_t item : data.Items()) {
    OutputLaw next;
    for (const auto& [key, mass] : law) {
      std::vector<int64_t> grown = key;
      for (size_t y = 0; y < outputs; ++y) {
        const double p = mechanism.probability(item, y);
        if (p == 0.0) continue;
        ++grown[y];
        next[grown] += mass * p;
        --grown[y];
      }
    }
    law = std::move(next);
  }
  return law;
}

ItemAudit VerifyItemMetricDp(const TransitionMechanism& mechanism,
                             double alpha, double delta) {
  ItemAudit audit;
  audit.divergence = -std::numeric_limits<double>::infinity();
  const size_t k = mechanism.input_size();
  for (size_t x = 0; x < k; ++x) {
    for (size_t x2 = 0; x2 < k; ++x2) {
      if (x == x2) continue;
      const double eps = alpha * mechanism.space().distance(x, x2);
      // Row spans always have equal length here.
      const double div = *HockeyStick(mechanism.channel().row(x),
                                      mechanism.channel().row(x2), eps);
      if (div > audit.divergence) {
        audit.divergence = div;
        audit.x = x;
        audit.x_prime = x2;
      }
    }
  }
  if (k < 2) audit.divergence = 0.0;
  audit.slack = audit.divergence - delta;
  audit.pass = audit.slack <= kAuditTolerance;
  return audit;
}

std::vector<Multiset> EnumerateMultisets(size_t k, int64_t m) {
  std::vector<Multiset> out;
  if (k == 0 || m < 0) return out;
  std::vector<int64_t> counts(k, 0);
  // Recursive distribution of m items over points idx..k-1.
  auto fill = [&](auto&& self, size_t idx, int64_t left) -> void {
    if (idx + 1 == k) {
      counts[idx] = left;
      out.emplace_back(counts);
      return;
    }
    for (int64_t c = left; c >= 0; --c) {
      counts[idx] = c;
      self(self, idx + 1, left - c);
    }
  };
  fill(fill, 0, m);
  return out;
}

absl::StatusOr<EmdAudit> VerifyEmdDp(const TransitionMechanism& mechanism,
                                     int64_t m, double alpha, double delta) {
  if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
  const MetricSpace& space = mechanism.space();
  const std::vector<Multiset> datasets = EnumerateMultisets(space.size(), m);
  std::vector<OutputLaw> laws;
  std::vector<Histogram> hists;
  laws.reserve(datasets.size());
  for (const Multiset& d : datasets) {
    absl::StatusOr<OutputLaw> law = ExactItemwiseDistribution(d, mechanism);
    if (!law.ok()) return law.status();
    laws.push_back(*std::move(law));
    hists.push_back(*d.Normalize());
  }
  EmdAudit audit;
  audit.divergence = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < datasets.size(); ++i) {
    for (size_t j = 0; j < datasets.size(); ++j) {
      if (i == j) continue;
      absl::StatusOr<double> emd = EmdCost(space, hists[i], hists[j]);
      if (!emd.ok()) return emd.status();
      const double div = LawHockeyStick(laws[i], laws[j], alpha * *emd);
      ++audit.pairs_checked;
      if (div > audit.divergence) {
        audit.divergence = div;
        audit.first = datasets[i];
        audit.second = datasets[j];
        audit.emd = *emd;
      }
    }
  }
  if (audit.pairs_checked == 0) audit.divergence = 0.0;
  audit.slack = audit.divergence - delta;
  audit.pass = audit.slack <= kAuditTolerance;
  return audit;
}

}  // namespace emdp
