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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "emdp/audit.h"
#include "emdp/frequency.h"
#include "emdp/shuffle_amp.h"
#include "emdp/transport.h"
#include "oracles.h"

namespace emdp {
namespace {

TEST(ProjectTest, PointMassProjectsToCopies) {
  absl::StatusOr<Multiset> p = Project(Multiset({0, 5, 0}), 17, 3);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(*p, Multiset({0, 17, 0}));
}

TEST(ProjectTest, RejectsBadInput) {
  EXPECT_FALSE(Project(Multiset({0, 0}), 3, 1).ok());
  EXPECT_FALSE(Project(Multiset({1, 0}), 0, 1).ok());
}

TEST(ProjectTest, FrequenciesMatchHistogram) {
  const Multiset k({3, 1, 4, 2});
  constexpr int64_t kDraws = 100000;
  absl::StatusOr<Multiset> p = Project(k, kDraws, 11);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->size(), kDraws);
  double l1 = 0.0;
  for (size_t x = 0; x < 4; ++x) {
    l1 += std::fabs(static_cast<double>(p->count(x)) / kDraws -
                    static_cast<double>(k.count(x)) / 10.0);
  }
  EXPECT_LE(l1, 4.0 * std::sqrt(4.0 / kDraws));
}

TEST(ProjectTest, SingleDrawPassesChiSquare) {
  const Multiset k({1, 2, 5});
  constexpr int kRepeats = 10000;
  std::vector<double> hits(3, 0.0);
  for (int i = 0; i < kRepeats; ++i) {
    const Multiset p = *Project(k, 1, i);
    ASSERT_EQ(p.size(), 1);
    for (size_t x = 0; x < 3; ++x) hits[x] += p.count(x);
  }
  double chi2 = 0.0;
  for (size_t x = 0; x < 3; ++x) {
    const double expected = kRepeats * k.count(x) / 8.0;
    chi2 += (hits[x] - expected) * (hits[x] - expected) / expected;
  }
  // Upper 0.001 quantile of chi-square with 2 degrees of freedom.
  EXPECT_LT(chi2, 13.8155);
}

TEST(BoundedEmdReductionTest, HidesDatasetSizes) {
  const std::vector<Multiset> users = {Multiset({1, 0}), Multiset({20, 7}),
                                       Multiset({0, 3})};
  auto total_size = [](const std::vector<Multiset>& projected)
      -> absl::StatusOr<int64_t> {
    int64_t n = 0;
    for (const Multiset& k : projected) n += k.size();
    return n;
  };
  for (uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(*BoundedEmdReduction(users, 8, total_size, seed), 24);
  }
}

TEST(BoundedEmdReductionTest, LargeSampleRecoversHistogram) {
  const std::vector<Multiset> users = {Multiset({2, 5, 3})};
  auto histogram = [](const std::vector<Multiset>& projected)
      -> absl::StatusOr<Histogram> { return projected[0].Normalize(); };
  absl::StatusOr<Histogram> h = BoundedEmdReduction(users, 10000, histogram, 4);
  ASSERT_TRUE(h.ok());
  EXPECT_LE(std::fabs((*h)[0] - 0.2) + std::fabs((*h)[1] - 0.5) +
                std::fabs((*h)[2] - 0.3),
            0.02);
}

TEST(BoundedEmdReductionTest, DeterministicAndPropagatesErrors) {
  const std::vector<Multiset> users = {Multiset({2, 5, 3}), Multiset({1, 1, 0})};
  auto keep = [](const std::vector<Multiset>& projected)
      -> absl::StatusOr<std::vector<Multiset>> { return projected; };
  EXPECT_EQ(*BoundedEmdReduction(users, 6, keep, 9),
            *BoundedEmdReduction(users, 6, keep, 9));
  auto fail = [](const std::vector<Multiset>&) -> absl::StatusOr<int> {
    return absl::InternalError("inner failed");
  };
  EXPECT_EQ(BoundedEmdReduction(users, 6, fail, 9).status().code(),
            absl::StatusCode::kInternal);
  EXPECT_FALSE(BoundedEmdReduction(std::vector<Multiset>{}, 6, keep, 9).ok());
  const std::vector<Multiset> with_empty = {Multiset({0, 0, 0})};
  EXPECT_FALSE(BoundedEmdReduction(with_empty, 6, keep, 9).ok());
}

TEST(ReductionBudgetTest, WorkedValue) {
  absl::StatusOr<MetricBudget> b = ReductionBudget(1.0, 1e-6, 0.1, 1000);
  ASSERT_TRUE(b.ok());
  const double denom = (1 + std::sqrt(2.0)) * 0.1 + 3.0 / 1000 * std::log(1e6);
  EXPECT_NEAR(denom, 0.2414214 + 0.0414465, 1e-7);
  EXPECT_NEAR(b->alpha, 1.0 / denom, 1e-12);
  EXPECT_NEAR(b->alpha, 3.535, 1e-3);
  EXPECT_EQ(b->delta, 1e-6);
}

TEST(ReductionBudgetTest, LargeSampleLimit) {
  const double limit = 1.0 / ((1 + std::sqrt(2.0)) * 0.1);
  EXPECT_NEAR(ReductionBudget(1.0, 1e-6, 0.1, 1000000000)->alpha, limit,
              1e-5 * limit);
  const int64_t s = static_cast<int64_t>(100 * std::log(1e6) / 0.1);
  EXPECT_NEAR(ReductionBudget(1.0, 1e-6, 0.1, s)->alpha, limit, 0.1 * limit);
}

TEST(ReductionBudgetTest, RejectsBadRanges) {
  EXPECT_FALSE(ReductionBudget(0.0, 1e-6, 0.1, 10).ok());
  EXPECT_FALSE(ReductionBudget(1.0, 0.0, 0.1, 10).ok());
  EXPECT_FALSE(ReductionBudget(1.0, 1e-6, 0.0, 10).ok());
  EXPECT_FALSE(ReductionBudget(1.0, 1e-6, 1.5, 10).ok());
  EXPECT_FALSE(ReductionBudget(1.0, 1e-6, 0.1, 0).ok());
}

// Couples samples through an optimal plan and counts how often the projected
// pair drifts past the stated distance bound.
double ViolationRate(int64_t s, int trials, double delta, uint64_t seed) {
  std::mt19937_64 gen(seed);
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const size_t k = 3 + t % 4;
    const MetricSpace space = oracle::RandomMetric(k, gen);
    const Histogram p = *Histogram::Create(oracle::RandomSimplex(k, gen));
    const Histogram q = *Histogram::Create(oracle::RandomSimplex(k, gen));
    const EmdResult opt = *Emd(space, p, q);
    const auto pairs = *SampleCoupling(opt.plan, s, seed * 1000003 + t);
    Multiset a(std::vector<int64_t>(k, 0));
    Multiset b(std::vector<int64_t>(k, 0));
    for (const auto& [x, y] : pairs) {
      a.Add(x);
      b.Add(y);
    }
    const double projected = *EmdCost(space, *a.Normalize(), *b.Normalize());
    if (projected > ProjectionDistanceBound(opt.cost, s, delta)) ++violations;
  }
  return static_cast<double>(violations) / trials;
}

TEST(ProjectionSmoothnessTest, ViolationRateWithinDelta) {
  EXPECT_LE(ViolationRate(100, 2000, 0.05, 1), 0.05 + 0.02);
  EXPECT_LE(ViolationRate(1000, 2000, 0.05, 2), 0.05 + 0.02);
}

// Exact law of the reduction followed by an itemwise release of the size-s
// projection.
OutputLaw CompositeLaw(const Multiset& k, int64_t s,
                       const TransitionMechanism& inner) {
  OutputLaw out;
  const Histogram h = *k.Normalize();
  const double p0 = h[0];
  for (int64_t c = 0; c <= s; ++c) {
    const double weight = std::tgamma(s + 1.0) /
                          (std::tgamma(c + 1.0) * std::tgamma(s - c + 1.0)) *
                          std::pow(p0, c) * std::pow(1 - p0, s - c);
    if (weight == 0.0) continue;
    const OutputLaw law = *ExactItemwiseDistribution(Multiset({c, s - c}), inner);
    for (const auto& [key, mass] : law) out[key] += weight * mass;
  }
  return out;
}

TEST(CompositePrivacyTest, TwoPointSpotAudit) {
  constexpr int64_t kS = 2;
  for (double epsilon : {0.5, 1.0, 2.0}) {
    for (double r : {0.2, 0.5, 1.0}) {
      const double delta = 1e-3;
      const MetricBudget inner_budget = *ReductionBudget(epsilon, delta, r, kS);
      // Pure composition over s items turns alpha / s per item into alpha.
      const double alpha0 = inner_budget.alpha / kS;
      const GkrrParams p = *GkrrParams::Create(2, 1, 0.25, alpha0);
      const TransitionMechanism inner = *GkrrMechanism(p);
      std::vector<Multiset> datasets;
      for (int64_t m = 1; m <= 6; ++m) {
        for (int64_t c = 0; c <= m; ++c) datasets.push_back(Multiset({c, m - c}));
      }
      for (const Multiset& a : datasets) {
        for (const Multiset& b : datasets) {
          const double emd =
              *EmdCost(inner.space(), *a.Normalize(), *b.Normalize());
          if (emd > r) continue;
          const double div = LawHockeyStick(CompositeLaw(a, kS, inner),
                                            CompositeLaw(b, kS, inner), epsilon);
          EXPECT_LE(div, 2 * delta + kAuditTolerance)
              << "eps=" << epsilon << " r=" << r;
        }
      }
    }
  }
}

}  // namespace
}  // namespace emdp
