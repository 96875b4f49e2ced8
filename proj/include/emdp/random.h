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

#ifndef EMDP_RANDOM_H_
#define EMDP_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <span>

namespace emdp {

// Seeded pseudo-random stream (xoshiro256**). All samplers are implemented
// here rather than through <random> distributions so that a given seed
// produces the same draws with every standard library.
//
// Independent substreams are obtained with Derive(seed, {i, j, ...}), which
// hashes the key path into a fresh state. Mechanisms use one substream per
// (trial, user, item) so results do not depend on iteration order.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed);

  static RandomStream Derive(uint64_t seed,
                             std::initializer_list<uint64_t> path);

  uint64_t NextU64();

  // Uniform on the open interval (0, 1).
  double Uniform();

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  double Normal();
  double Exponential();

  // Laplace with location 0 and the given scale (mean absolute value).
  double Laplace(double scale);

  // Gamma with the given shape and scale (mean shape * scale), by
  // Marsaglia-Tsang.
  double Gamma(double shape, double scale);

  // Index drawn proportionally to `weights` (need not be normalized).
  size_t Discrete(std::span<const double> weights);

  // Index drawn from a cumulative table whose last entry is the total mass.
  size_t DiscreteFromCumulative(std::span<const double> cumulative);

 private:
  uint64_t state_[4];
};

// SplitMix64 finalizer, exposed for deriving seeds.
uint64_t MixSeed(uint64_t x);

}  // namespace emdp

#endif  // EMDP_RANDOM_H_
