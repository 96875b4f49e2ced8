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

// Exact earth-mover's distance on a finite metric space.
//
// Datasets are multisets over the points of a MetricSpace; their normalized
// histograms are probability vectors. Emd() solves the transportation
// problem exactly by successive shortest paths, and BvnMatching() solves the
// equivalent assignment problem for two multisets of the same size.

#ifndef EMDP_TRANSPORT_H_
#define EMDP_TRANSPORT_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/metric_space.h"

namespace emdp {

// A probability vector over the points of a space.
class Histogram {
 public:
  // Entries must be nonnegative and sum to 1 within 1e-12.
  static absl::StatusOr<Histogram> Create(std::vector<double> mass);
  // Point mass at x.
  static Histogram PointMass(size_t k, size_t x);

  size_t size() const { return mass_.size(); }
  double operator[](size_t x) const { return mass_[x]; }
  const std::vector<double>& mass() const { return mass_; }

 private:
  explicit Histogram(std::vector<double> mass) : mass_(std::move(mass)) {}
  friend class Multiset;

  std::vector<double> mass_;
};

// A user's dataset: occurrence counts per point.
class Multiset {
 public:
  Multiset() = default;
  explicit Multiset(std::vector<int64_t> counts);
  // From a list of item occurrences over a k-point space.
  static absl::StatusOr<Multiset> FromItems(size_t k,
                                            std::span<const size_t> items);

  size_t domain_size() const { return counts_.size(); }
  int64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  int64_t count(size_t x) const { return counts_[x]; }
  const std::vector<int64_t>& counts() const { return counts_; }

  // Items in ascending point order, one entry per occurrence.
  std::vector<size_t> Items() const;

  // Fails on an empty multiset.
  absl::StatusOr<Histogram> Normalize() const;

  void Add(size_t x, int64_t times = 1);

  bool operator==(const Multiset& other) const {
    return counts_ == other.counts_;
  }

 private:
  std::vector<int64_t> counts_;
  int64_t size_ = 0;
};

// The union K_1 + ... + K_n of several datasets on the same space.
absl::StatusOr<Multiset> Pool(std::span<const Multiset> users);

// A joint mass table on X x X, row-major.
class Coupling {
 public:
  Coupling() = default;
  explicit Coupling(size_t k) : k_(k), joint_(k * k, 0.0) {}

  size_t size() const { return k_; }
  double& operator()(size_t x, size_t y) { return joint_[x * k_ + y]; }
  double operator()(size_t x, size_t y) const { return joint_[x * k_ + y]; }
  const std::vector<double>& joint() const { return joint_; }

  std::vector<double> FirstMarginal() const;
  std::vector<double> SecondMarginal() const;

  // Expected distance under the joint law.
  double Cost(const MetricSpace& space) const;

  // Checks nonnegativity and that the marginals match p and q within
  // `tolerance`.
  absl::Status Validate(const Histogram& p, const Histogram& q,
                        double tolerance = 1e-9) const;

 private:
  size_t k_ = 0;
  std::vector<double> joint_;
};

struct EmdResult {
  double cost = 0.0;
  Coupling plan;
};

// Minimum expected transport distance between p and q, with an optimal plan.
// Only the cost is unique; the plan is any optimum.
absl::StatusOr<EmdResult> Emd(const MetricSpace& space, const Histogram& p,
                              const Histogram& q);

// Convenience wrapper returning only the cost.
absl::StatusOr<double> EmdCost(const MetricSpace& space, const Histogram& p,
                               const Histogram& q);

// An optimal pairing of two equal-size multisets. `left` and `right` are the
// items of each multiset in ascending order; left[i] is matched with
// right[permutation[i]]. `cost` is the mean matched distance.
struct Matching {
  std::vector<size_t> left;
  std::vector<size_t> right;
  std::vector<size_t> permutation;
  double cost = 0.0;
};

absl::StatusOr<Matching> BvnMatching(const MetricSpace& space,
                                     const Multiset& k1, const Multiset& k2);

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
// Returns assignment[row] = column.
std::vector<size_t> SolveAssignment(size_t n, std::span<const double> cost);

// `count` i.i.d. pairs drawn proportionally to the joint mass of `plan`.
absl::StatusOr<std::vector<std::pair<size_t, size_t>>> SampleCoupling(
    const Coupling& plan, int64_t count, uint64_t seed);

// Reads one multiset from CSV: either a `point_index` column with one row
// per occurrence, or `point_index,count` aggregated rows.
absl::StatusOr<Multiset> ReadMultisetCsv(const std::string& path, size_t k);

// Reads per-user datasets from CSV with `user_id,point_index` columns (and an
// optional `count` column). Users are returned in ascending user_id order.
absl::StatusOr<std::vector<Multiset>> ReadUsersCsv(const std::string& path,
                                                   size_t k);

}  // namespace emdp

#endif  // EMDP_TRANSPORT_H_
