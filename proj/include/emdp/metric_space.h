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

// Finite metric spaces with distances normalized to [0, 1].
//
// Points are 0-based indices. A MetricSpace stores the full dense distance
// table and is immutable after construction, so it can be shared freely
// between threads.

#ifndef EMDP_METRIC_SPACE_H_
#define EMDP_METRIC_SPACE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace emdp {

// Absolute tolerance used when validating metric axioms.
inline constexpr double kMetricTolerance = 1e-12;

// Shape of a clustered space B x C: `s` clusters of `t` points each, with
// distance `r` inside a cluster and 1 across clusters.
struct ClusteredSpace {
  int s = 0;
  int t = 0;
  double r = 0.0;

  int size() const { return s * t; }
  // Cluster-major index of point (cluster, element).
  int Index(int cluster, int element) const { return cluster * t + element; }
  int ClusterOf(int index) const { return index / t; }
};

struct EmbeddingTable;
struct EmbeddedSpace;

class MetricSpace {
 public:
  // Validates symmetry, zero diagonal, nonnegativity, the triangle
  // inequality and normalization (max distance <= 1), all within
  // kMetricTolerance. `dist` is row-major k x k.
  static absl::StatusOr<MetricSpace> Create(size_t k, std::vector<double> dist);

  // Discrete metric: distance 1 between every pair of distinct points.
  static MetricSpace Discrete(size_t k);

  size_t size() const { return k_; }
  double distance(size_t x, size_t y) const { return dist_[x * k_ + y]; }
  const std::vector<double>& table() const { return dist_; }

  double Diameter() const;

  // Set when the space was built from a clustered shape.
  const std::optional<ClusteredSpace>& clustered() const { return clustered_; }

  bool operator==(const MetricSpace& other) const {
    return k_ == other.k_ && dist_ == other.dist_;
  }

 private:
  friend absl::StatusOr<MetricSpace> BuildClustered(int, int, double);
  friend absl::StatusOr<EmbeddedSpace> BuildEmbedding(const EmbeddingTable&);

  MetricSpace(size_t k, std::vector<double> dist)
      : k_(k), dist_(std::move(dist)) {}

  size_t k_ = 0;
  std::vector<double> dist_;
  std::optional<ClusteredSpace> clustered_;
};

// Checks the MetricSpace invariants on an arbitrary table; returns the
// first violation found.
absl::Status ValidateMetric(size_t k, const std::vector<double>& dist,
                            double tolerance = kMetricTolerance);

absl::StatusOr<MetricSpace> BuildClustered(int s, int t, double r);
absl::StatusOr<MetricSpace> BuildClustered(const ClusteredSpace& shape);

// Per-point embedding vectors phi(x) in R^dim.
struct EmbeddingTable {
  int dim = 0;
  std::vector<std::vector<double>> vectors;
};

struct EmbeddedSpace {
  MetricSpace space;
  // The raw Euclidean diameter that distances were divided by. A distance d
  // in `space` corresponds to d * normalization in embedding units.
  double normalization;
};

// Euclidean distances between embedding vectors divided by their maximum.
absl::StatusOr<EmbeddedSpace> BuildEmbedding(const EmbeddingTable& table);

// Text serialization. A general space is written as
//
//   metric k=<n>
//   <n lines of n space-separated decimals>
//
// and a space carrying a clustered shape as `clustered s=<s> t=<t> r=<r>`.
std::string FormatMetricSpace(const MetricSpace& space);
std::string FormatClustered(const ClusteredSpace& shape);
absl::StatusOr<MetricSpace> ParseMetricSpace(const std::string& text);

// Accepts either "clustered:s,t,r" or a path to a file in the text format.
absl::StatusOr<MetricSpace> LoadMetricSpace(const std::string& spec);

}  // namespace emdp

#endif  // EMDP_METRIC_SPACE_H_
