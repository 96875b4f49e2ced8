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

#include "emdp/linear_mech.h"

#include <cmath>
#include <random>
#include <vector>

#include "Eigen/Dense"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace emdp {
namespace {

Matrix RandomTable(size_t d, size_t k, std::mt19937_64& gen,
                   double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  Matrix f(d, k);
  for (size_t i = 0; i < d; ++i) {
    for (size_t x = 0; x < k; ++x) f(i, x) = z(gen);
  }
  return f;
}

double BruteLipschitz(const MetricSpace& space, const Matrix& f) {
  double best = 0.0;
  for (size_t x = 0; x < space.size(); ++x) {
    for (size_t y = 0; y < space.size(); ++y) {
      if (x == y) continue;
      Eigen::VectorXd diff(f.rows());
      for (size_t i = 0; i < f.rows(); ++i) diff(i) = f(i, x) - f(i, y);
      best = std::max(best, diff.norm() / space.distance(x, y));
    }
  }
  return best;
}

TEST(LinearQueryTest, EvaluateIsMatrixVectorProduct) {
  std::mt19937_64 gen(1);
  const MetricSpace space = oracle::RandomMetric(5, gen);
  const Matrix f = RandomTable(3, 5, gen);
  absl::StatusOr<LinearQuery> q = LinearQuery::Create(space, f);
  ASSERT_TRUE(q.ok());
  const Multiset k({2, 0, 1, 1, 4});
  const std::vector<double> got = *q->Evaluate(k);
  for (size_t i = 0; i < 3; ++i) {
    double expect = 0.0;
    for (size_t x = 0; x < 5; ++x) expect += f(i, x) * k.count(x) / 8.0;
    EXPECT_NEAR(got[i], expect, 1e-12);
  }
  EXPECT_FALSE(q->Evaluate(Multiset({0, 0, 0, 0, 0})).ok());
  EXPECT_FALSE(LinearQuery::Create(space, RandomTable(3, 4, gen)).ok());
}

TEST(LipschitzTest, DistanceToCenterIsOneLipschitz) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricSpace space = oracle::RandomMetric(6, gen);
    Matrix f(1, 6);
    for (size_t x = 0; x < 6; ++x) f(0, x) = space.distance(x, trial % 6);
    EXPECT_LE(*LipschitzConstant(space, f), 1.0 + 1e-12);
  }
}

TEST(LipschitzTest, ConstantQueryIsZero) {
  const MetricSpace space = *BuildClustered(2, 3, 0.2);
  Matrix f(2, 6, 0.75);
  EXPECT_EQ(*LipschitzConstant(space, f), 0.0);
}

TEST(LipschitzTest, MatchesPairwiseMaximum) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t k = 3 + trial % 6;
    const MetricSpace space = oracle::RandomMetric(k, gen);
    const Matrix f = RandomTable(3, k, gen);
    EXPECT_NEAR(*LipschitzConstant(space, f), BruteLipschitz(space, f), 1e-12);
  }
}

TEST(LipschitzTest, ZeroDistanceWithDifferentValuesIsUnbounded) {
  absl::StatusOr<MetricSpace> space =
      MetricSpace::Create(3, {0, 0, 1, 0, 0, 1, 1, 1, 0});
  ASSERT_TRUE(space.ok());
  Matrix f(1, 3);
  f(0, 0) = 0.0;
  f(0, 1) = 1.0;
  EXPECT_FALSE(LipschitzConstant(*space, f).ok());
  f(0, 1) = 0.0;
  f(0, 2) = 0.3;
  EXPECT_DOUBLE_EQ(*LipschitzConstant(*space, f), 0.3);
}

// The query difference never exceeds l times the EMD of the histograms.
TEST(SensitivityTest, BoundedByLipschitzTimesEmd) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t k = 2 + trial % 7;
    const MetricSpace space = oracle::RandomMetric(k, gen);
    const Matrix f = RandomTable(1 + trial % 4, k, gen);
    const double ell = *LipschitzConstant(space, f);
    const LinearQuery q = *LinearQuery::Create(space, f);
    const Multiset a = oracle::RandomMultiset(k, 1 + trial % 9, gen);
    const Multiset b = oracle::RandomMultiset(k, 1 + trial % 5, gen);
    const std::vector<double> qa = *q.Evaluate(a);
    const std::vector<double> qb = *q.Evaluate(b);
    double sq = 0.0;
    for (size_t i = 0; i < qa.size(); ++i) sq += (qa[i] - qb[i]) * (qa[i] - qb[i]);
    const double emd = *EmdCost(space, *a.Normalize(), *b.Normalize());
    EXPECT_LE(std::sqrt(sq), ell * emd + 1e-9);
  }
}

TEST(NoiseTest, NoiseForBudget) {
  absl::StatusOr<NoiseSpec> n =
      NoiseForBudget(NoiseKind::kGammaBall, MetricBudget{25.0, 0.0}, 1.0);
  ASSERT_TRUE(n.ok());
  EXPECT_DOUBLE_EQ(n->omega, 0.04);
  EXPECT_FALSE(
      NoiseForBudget(NoiseKind::kGaussian, MetricBudget{1.0, 0.0}, 1.0).ok());
  EXPECT_FALSE(
      NoiseForBudget(NoiseKind::kGammaBall, MetricBudget{0.0, 0.0}, 1.0).ok());
}

TEST(NoiseTest, GammaBallMeanMagnitude) {
  struct Case {
    size_t dim;
    double omega;
    double ell;
  };
  for (const Case& c : {Case{1, 0.04, 1.0}, Case{3, 0.5, 1.0}, Case{4, 0.2, 2.5}}) {
    NoiseSpec spec;
    spec.omega = c.omega;
    spec.lipschitz = c.ell;
    RandomStream rng(99);
    constexpr int kDraws = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double r = L2Norm(SampleNoise(spec, c.omega, c.dim, rng));
      sum += r;
      sq += r * r;
    }
    const double mean = sum / kDraws;
    const double se = std::sqrt((sq / kDraws - mean * mean) / kDraws);
    EXPECT_NEAR(mean, c.ell * c.dim * c.omega, 3.0 * se) << "dim " << c.dim;
  }
}

TEST(NoiseTest, GammaBallDirectionIsUniform) {
  NoiseSpec spec;
  spec.omega = 1.0;
  RandomStream rng(5);
  constexpr int kDraws = 100000;
  constexpr size_t kDim = 3;
  std::vector<double> mean(kDim, 0.0);
  for (int i = 0; i < kDraws; ++i) {
    std::vector<double> z = SampleNoise(spec, 1.0, kDim, rng);
    const double n = L2Norm(z);
    for (size_t j = 0; j < kDim; ++j) mean[j] += z[j] / n / kDraws;
  }
  EXPECT_LE(L2Norm(mean), 4.0 / std::sqrt(kDraws) * std::sqrt(kDim));
}

TEST(NoiseTest, L1BallMeanMagnitude) {
  NoiseSpec spec;
  spec.omega = 0.3;
  spec.norm = BallNorm::kL1;
  RandomStream rng(6);
  constexpr int kDraws = 100000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += L1Norm(SampleNoise(spec, 0.3, 2, rng));
  EXPECT_NEAR(sum / kDraws, 2 * 0.3, 0.01);
}

TEST(NoiseTest, GaussianStandardDeviation) {
  NoiseSpec spec;
  spec.kind = NoiseKind::kGaussian;
  spec.delta = 1e-6;
  spec.lipschitz = 1.5;
  const double omega = 0.2;
  const double expected = 1.5 * 0.2 * std::sqrt(1.25 * std::log(1e6));
  EXPECT_DOUBLE_EQ(GaussianNoiseStd(1.5, omega, 1e-6), expected);
  RandomStream rng(7);
  constexpr int kDraws = 1000000;
  double sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = SampleNoise(spec, omega, 1, rng)[0];
    sq += z * z;
  }
  EXPECT_NEAR(std::sqrt(sq / kDraws), expected, 0.02 * expected);
}

TEST(PrivEmdLinearTest, VanishingNoiseReturnsQuery) {
  std::mt19937_64 gen(8);
  const MetricSpace space = oracle::RandomMetric(5, gen);
  const Matrix f = RandomTable(3, 5, gen);
  const LinearQuery q = *LinearQuery::Create(space, f);
  NoiseSpec spec;
  spec.omega = 1e-12;
  spec.lipschitz = *LipschitzConstant(space, f);
  const Multiset k({1, 2, 0, 0, 3});
  const std::vector<double> got = *PrivEmdLinear(space, q, k, spec, {}, 3);
  const std::vector<double> exact = *q.Evaluate(k);
  for (size_t i = 0; i < 3; ++i) EXPECT_NEAR(got[i], exact[i], 1e-6);
}

TEST(PrivEmdLinearTest, DeterministicGivenSeed) {
  std::mt19937_64 gen(9);
  const MetricSpace space = oracle::RandomMetric(4, gen);
  const Matrix f = RandomTable(2, 4, gen);
  const LinearQuery q = *LinearQuery::Create(space, f);
  NoiseSpec spec;
  spec.omega = 0.5;
  spec.lipschitz = *LipschitzConstant(space, f);
  const Multiset k({1, 1, 1, 1});
  EXPECT_EQ(*PrivEmdLinear(space, q, k, spec, {}, 11),
            *PrivEmdLinear(space, q, k, spec, {}, 11));
  EXPECT_NE(*PrivEmdLinear(space, q, k, spec, {}, 11),
            *PrivEmdLinear(space, q, k, spec, {}, 12));
}

TEST(PrivEmdLinearTest, RejectsUnderstatedLipschitz) {
  std::mt19937_64 gen(10);
  const MetricSpace space = oracle::RandomMetric(4, gen);
  const Matrix f = RandomTable(2, 4, gen);
  const LinearQuery q = *LinearQuery::Create(space, f);
  NoiseSpec spec;
  spec.lipschitz = 0.5 * *LipschitzConstant(space, f);
  const Multiset k({1, 1, 1, 1});
  EXPECT_FALSE(PrivEmdLinear(space, q, k, spec, {}, 1).ok());
  LinearReleaseOptions unchecked;
  unchecked.unchecked = true;
  EXPECT_TRUE(PrivEmdLinear(space, q, k, spec, unchecked, 1).ok());
  spec.lipschitz = 10.0;
  spec.omega = 0.0;
  EXPECT_FALSE(PrivEmdLinear(space, q, k, spec, {}, 1).ok());
}

TEST(PrivEmdLinearTest, CentralModelScalesNoiseByUsers) {
  const MetricSpace space = MetricSpace::Discrete(2);
  Matrix f(1, 2);
  f(0, 1) = 1.0;
  const LinearQuery q = *LinearQuery::Create(space, f);
  NoiseSpec spec;
  spec.omega = 1.0;
  spec.lipschitz = 1.0;
  LinearReleaseOptions central;
  central.model = TrustModel::kCentral;
  central.num_users = 50;
  const Multiset pooled({50, 50});
  constexpr int kTrials = 20000;
  double err = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    err += std::fabs((*PrivEmdLinear(space, q, pooled, spec, central, t))[0] -
                     0.5);
  }
  // |noise| ~ Gamma(1, omega / n), mean 0.02.
  EXPECT_NEAR(err / kTrials, 0.02, 0.001);
}

TEST(EmbeddingQueryTest, UnitRowPicksFirstCoordinate) {
  EmbeddingTable emb{2, {{1, 0}, {0, 1}, {3, 0}}};
  Matrix f(1, 2);
  f(0, 0) = 1.0;
  const Multiset k({1, 2, 1});
  absl::StatusOr<std::vector<double>> v = EmbeddingQuery(f, emb, k);
  ASSERT_TRUE(v.ok());
  EXPECT_DOUBLE_EQ((*v)[0], (1.0 + 0.0 + 3.0) / 4.0);
}

TEST(EmbeddingQueryTest, PointMassGivesEmbeddedValue) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> z(0.0, 1.0);
  EmbeddingTable emb{3, {}};
  for (int i = 0; i < 4; ++i) emb.vectors.push_back({z(gen), z(gen), z(gen)});
  Matrix f(2, 3);
  f(0, 0) = 0.6;
  f(0, 1) = 0.8;
  f(1, 2) = -1.0;
  const std::vector<double> v = *EmbeddingQuery(f, emb, Multiset({0, 0, 3, 0}));
  EXPECT_NEAR(v[0], 0.6 * emb.vectors[2][0] + 0.8 * emb.vectors[2][1], 1e-12);
  EXPECT_NEAR(v[1], -emb.vectors[2][2], 1e-12);
}

TEST(EmbeddingQueryTest, CompositeMatchesLinearQueryAndLipschitzBound) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> z(0.0, 1.0);
  EmbeddingTable emb{3, {}};
  for (int i = 0; i < 6; ++i) emb.vectors.push_back({z(gen), z(gen), z(gen)});
  Matrix f = RandomTable(2, 3, gen);
  for (size_t i = 0; i < 2; ++i) {
    const double n = L2Norm(f.row(i));
    for (double& v : f.row(i)) v /= n;
  }
  absl::StatusOr<Matrix> composite = ComposeEmbeddingQuery(f, emb);
  ASSERT_TRUE(composite.ok());
  Eigen::MatrixXd phi(3, 6);
  for (int x = 0; x < 6; ++x) {
    for (int i = 0; i < 3; ++i) phi(i, x) = emb.vectors[x][i];
  }
  const Eigen::MatrixXd expected = oracle::ToEigen(f) * phi;
  EXPECT_LT(MaxAbsDiff(*composite, oracle::FromEigen(expected)), 1e-12);

  const EmbeddedSpace space = *BuildEmbedding(emb);
  const LinearQuery q = *LinearQuery::Create(space.space, *composite);
  const Multiset k({1, 0, 2, 0, 1, 1});
  NoiseSpec none;
  none.omega = 1e-15;
  none.lipschitz = EmbeddingLipschitzBound(f, space.normalization);
  const std::vector<double> via_release =
      *PrivEmdLinear(space.space, q, k, none, {}, 1);
  const std::vector<double> direct = *EmbeddingQuery(f, emb, k);
  for (size_t i = 0; i < 2; ++i) EXPECT_NEAR(via_release[i], direct[i], 1e-9);
  EXPECT_LE(*LipschitzConstant(space.space, *composite),
            none.lipschitz * (1.0 + 1e-9));
}

TEST(EmbeddingQueryTest, RejectsLongRows) {
  EmbeddingTable emb{2, {{1, 0}, {0, 1}}};
  Matrix f(1, 2);
  f(0, 0) = 1.0;
  f(0, 1) = 0.5;
  EXPECT_FALSE(ComposeEmbeddingQuery(f, emb).ok());
}

TEST(UserLevelBaselineTest, SensitivityAndNoiseScale) {
  Matrix f(2, 3);
  f(0, 0) = 3.0;
  f(1, 0) = 4.0;
  f(0, 2) = 1.0;
  EXPECT_DOUBLE_EQ(UserLevelSensitivity(f), 10.0);
  const LinearQuery q = *LinearQuery::Create(MetricSpace::Discrete(3), f);
  const Multiset k({1, 1, 1});
  const std::vector<double> exact = *q.Evaluate(k);
  const UserBudget huge{1e12, 1e-6};
  const std::vector<double> near_exact =
      *UserLevelGaussianBaseline(q, k, huge, {}, 4);
  EXPECT_NEAR(near_exact[0], exact[0], 1e-9);

  const UserBudget b{2.0, 1e-5};
  const double sd = GaussianNoiseStd(10.0, 0.5, 1e-5);
  constexpr int kTrials = 1000000;
  double sq = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const double v = (*UserLevelGaussianBaseline(q, k, b, {}, t))[1] - exact[1];
    sq += v * v;
  }
  EXPECT_NEAR(std::sqrt(sq / kTrials), sd, 0.02 * sd);
}

}  // namespace
}  // namespace emdp
