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

#include "emdp/random.h"

#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace emdp {
namespace {

TEST(RandomStreamTest, SameSeedSameSequence) {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RandomStreamTest, DerivedStreamsDiffer) {
  std::set<uint64_t> firsts;
  for (uint64_t i = 0; i < 64; ++i) {
    firsts.insert(RandomStream::Derive(7, {i}).NextU64());
  }
  EXPECT_EQ(firsts.size(), 64u);
  EXPECT_NE(RandomStream::Derive(7, {1, 2}).NextU64(),
            RandomStream::Derive(7, {2, 1}).NextU64());
}

TEST(RandomStreamTest, UniformIsOpenUnitInterval) {
  RandomStream rng(1);
  double sum = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.Uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is 1/sqrt(12 N).
  EXPECT_NEAR(sum / kDraws, 0.5, 4.0 / std::sqrt(12.0 * kDraws));
}

TEST(RandomStreamTest, UniformIntCoversRange) {
  RandomStream rng(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[rng.UniformInt(7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(RandomStreamTest, GammaMeanAndVariance) {
  for (double shape : {0.5, 1.0, 3.0, 10.0}) {
    RandomStream rng(11);
    constexpr int kDraws = 200000;
    const double scale = 0.7;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double g = rng.Gamma(shape, scale);
      sum += g;
      sq += g * g;
    }
    const double mean = sum / kDraws;
    const double var = sq / kDraws - mean * mean;
    const double true_var = shape * scale * scale;
    EXPECT_NEAR(mean, shape * scale, 4.0 * std::sqrt(true_var / kDraws))
        << "shape " << shape;
    EXPECT_NEAR(var, true_var, 0.03 * true_var) << "shape " << shape;
  }
}

TEST(RandomStreamTest, NormalAndLaplaceMoments) {
  RandomStream rng(5);
  constexpr int kDraws = 200000;
  double n1 = 0.0;
  double n2 = 0.0;
  double labs = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.Normal();
    n1 += z;
    n2 += z * z;
    labs += std::fabs(rng.Laplace(2.0));
  }
  EXPECT_NEAR(n1 / kDraws, 0.0, 0.01);
  EXPECT_NEAR(n2 / kDraws, 1.0, 0.015);
  EXPECT_NEAR(labs / kDraws, 2.0, 0.03);
}

TEST(RandomStreamTest, DiscreteFollowsWeights) {
  RandomStream rng(9);
  const std::vector<double> w = {1.0, 0.0, 3.0};
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 40000; ++i) ++hits[rng.Discrete(w)];
  EXPECT_EQ(hits[1], 0);
  EXPECT_NEAR(hits[0], 10000, 400);
  const std::vector<double> cum = {1.0, 1.0, 4.0};
  std::vector<int> hits2(3, 0);
  for (int i = 0; i < 40000; ++i) ++hits2[rng.DiscreteFromCumulative(cum)];
  EXPECT_EQ(hits2[1], 0);
  EXPECT_NEAR(hits2[2], 30000, 400);
}

}  // namespace
}  // namespace emdp
