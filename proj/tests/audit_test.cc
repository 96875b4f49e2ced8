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
#include <random>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "emdp/frequency.h"
#include "emdp/shuffle_amp.h"
#include "oracles.h"

namespace emdp {
namespace {

TransitionMechanism Gkrr(int s, int t, double r, double alpha0) {
  return *GkrrMechanism(*GkrrParams::Create(s, t, r, alpha0));
}

TEST(HockeyStickTest, BasicValues) {
  const std::vector<double> p = {0.8, 0.2};
  const std::vector<double> q = {0.2, 0.8};
  EXPECT_NEAR(*HockeyStick(p, p, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(*HockeyStick(p, p, 3.0), 0.0, 1e-15);
  EXPECT_NEAR(*HockeyStick(p, q, 0.0), 0.6, 1e-15);
  EXPECT_EQ(*HockeyStick(p, q, 50.0), 0.0);
  const std::vector<double> short_q = {1.0};
  EXPECT_FALSE(HockeyStick(p, short_q, 0.0).ok());
  EXPECT_FALSE(HockeyStick(p, q, -1.0).ok());
}

TEST(HockeyStickTest, MonotoneAndTotalVariationAtZero) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> p = oracle::RandomSimplex(6, gen);
    const std::vector<double> q = oracle::RandomSimplex(6, gen);
    double tv = 0.0;
    for (size_t i = 0; i < 6; ++i) tv += std::fabs(p[i] - q[i]) / 2;
    EXPECT_NEAR(*HockeyStick(p, q, 0.0), tv, 1e-12);
    double last = *HockeyStick(p, q, 0.0);
    for (double eps = 0.1; eps < 5.0; eps += 0.1) {
      const double v = *HockeyStick(p, q, eps);
      EXPECT_LE(v, last + 1e-15);
      last = v;
    }
  }
}

TEST(VerifyItemMetricDpTest, CertifiedGkrrPassesTightly) {
  const TransitionMechanism mech = Gkrr(2, 3, 0.3, 1.5);
  const ItemAudit audit = VerifyItemMetricDp(mech, 1.5, 0.0);
  EXPECT_TRUE(audit.pass);
  EXPECT_LE(audit.slack, 1e-12);
  EXPECT_NEAR(audit.divergence, 0.0, 1e-12);
}

TEST(VerifyItemMetricDpTest, FailsBelowCertifiedLevel) {
  const TransitionMechanism mech = Gkrr(2, 3, 0.3, 1.5);
  const ItemAudit audit = VerifyItemMetricDp(mech, 0.9 * 1.5, 0.0);
  EXPECT_FALSE(audit.pass);
  EXPECT_GT(audit.divergence, 0.0);
  EXPECT_NE(audit.x, audit.x_prime);
}

TEST(VerifyItemMetricDpTest, UniformChannelAtZero) {
  const TransitionMechanism mech = Gkrr(2, 2, 0.2, 0.0);
  EXPECT_TRUE(VerifyItemMetricDp(mech, 0.0, 0.0).pass);
}

TEST(ExactItemwiseDistributionTest, SingleItemIsChannelRow) {
  const TransitionMechanism mech = Gkrr(2, 2, 0.25, 1.0);
  const OutputLaw law = *ExactItemwiseDistribution(Multiset({0, 0, 1, 0}), mech);
  ASSERT_EQ(law.size(), 4u);
  for (const auto& [key, mass] : law) {
    const size_t y = std::find(key.begin(), key.end(), 1) - key.begin();
    EXPECT_NEAR(mass, mech.probability(2, y), 1e-15);
  }
}

TEST(ExactItemwiseDistributionTest, TwoIdenticalItemsAreBinomial) {
  const TransitionMechanism mech = Gkrr(1, 3, 0.25, 1.0);
  const OutputLaw law = *ExactItemwiseDistribution(Multiset({2, 0, 0}), mech);
  for (const auto& [key, mass] : law) {
    double expected = 1.0;
    for (size_t y = 0; y < 3; ++y) {
      expected *= std::pow(mech.probability(0, y), key[y]);
    }
    if (*std::max_element(key.begin(), key.end()) == 1) expected *= 2;
    EXPECT_NEAR(mass, expected, 1e-15);
  }
}

TEST(ExactItemwiseDistributionTest, MatchesTupleEnumeration) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    const TransitionMechanism mech = Gkrr(2, 2, 0.3, 0.5 + 0.1 * trial);
    const Multiset k = oracle::RandomMultiset(4, 1 + trial % 5, gen);
    std::vector<size_t> items = k.Items();
    std::shuffle(items.begin(), items.end(), gen);
    const auto expected = oracle::TupleEnumerationLaw(mech.channel(), items);
    const OutputLaw law = *ExactItemwiseDistribution(k, mech);
    ASSERT_EQ(law.size(), expected.size());
    double total = 0.0;
    for (const auto& [key, mass] : law) {
      EXPECT_NEAR(mass, expected.at(key), 1e-14);
      total += mass;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ExactItemwiseDistributionTest, RejectsLargeEnumerations) {
  const TransitionMechanism mech = Gkrr(2, 5, 0.3, 1.0);
  EXPECT_EQ(ExactItemwiseDistribution(Multiset({7, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                                      mech)
                .status()
                .code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(EnumerateMultisetsTest, CountsAndUniqueness) {
  const std::vector<Multiset> all = EnumerateMultisets(4, 3);
  EXPECT_EQ(all.size(), 20u);  // C(6, 3)
  std::set<std::vector<int64_t>> seen;
  for (const Multiset& k : all) {
    EXPECT_EQ(k.size(), 3);
    seen.insert(k.counts());
  }
  EXPECT_EQ(seen.size(), all.size());
}

TEST(VerifyEmdDpTest, SingleItemMatchesItemAudit) {
  const TransitionMechanism mech = Gkrr(2, 2, 0.3, 1.2);
  for (double alpha : {0.6, 1.2}) {
    const EmdAudit emd = *VerifyEmdDp(mech, 1, alpha, 0.0);
    const ItemAudit item = VerifyItemMetricDp(mech, alpha, 0.0);
    EXPECT_EQ(emd.pass, item.pass);
    EXPECT_NEAR(emd.divergence, item.divergence, 1e-15);
    EXPECT_EQ(emd.pairs_checked, 12);
  }
}

TEST(VerifyEmdDpTest, AmplifiedBudgetPassesOnTwoPoints) {
  AmplificationOptions loose;
  loose.enforce_applicability = false;
  for (int64_t m : {2, 3}) {
    for (double a0 : {0.2, 0.5}) {
      const TransitionMechanism mech = Gkrr(1, 2, 0.3, a0);
      const AmplificationResult budget =
          *EffectiveBudget(a0, 1e-3, m, 1, TrustModel::kLocal, loose);
      absl::StatusOr<EmdAudit> audit =
          VerifyEmdDp(mech, m, budget.alpha_eff, budget.delta_eff);
      ASSERT_TRUE(audit.ok());
      EXPECT_TRUE(audit->pass) << "m=" << m << " a0=" << a0;
    }
  }
}

TEST(VerifyEmdDpTest, HalfBudgetFailsWithWitness) {
  const TransitionMechanism mech = Gkrr(1, 2, 0.3, 1.0);
  // Pure composition makes m * alpha0 = 2 a sound bound for m = 2.
  EXPECT_TRUE(VerifyEmdDp(mech, 2, 2.0, 0.0)->pass);
  const EmdAudit audit = *VerifyEmdDp(mech, 2, 0.5, 0.0);
  EXPECT_FALSE(audit.pass);
  EXPECT_GT(audit.emd, 0.0);
  EXPECT_NE(audit.first, audit.second);
}

TEST(VerifyEmdDpTest, PassIsMonotone) {
  const TransitionMechanism mech = Gkrr(1, 2, 0.3, 1.0);
  const EmdAudit base = *VerifyEmdDp(mech, 3, 1.5, 0.01);
  if (base.pass) {
    EXPECT_TRUE(VerifyEmdDp(mech, 3, 2.0, 0.01)->pass);
    EXPECT_TRUE(VerifyEmdDp(mech, 3, 1.5, 0.05)->pass);
  }
  const EmdAudit big = *VerifyEmdDp(mech, 3, 3.0, 0.0);
  EXPECT_TRUE(big.pass);
  EXPECT_TRUE(VerifyEmdDp(mech, 3, 4.0, 0.1)->pass);
}

TEST(VerifyEmdDpTest, RejectsBadSize) {
  EXPECT_FALSE(VerifyEmdDp(Gkrr(1, 2, 0.3, 1.0), 0, 1.0, 0.0).ok());
}

}  // namespace
}  // namespace emdp
