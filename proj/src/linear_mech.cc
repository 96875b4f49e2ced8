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

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace emdp {

absl::StatusOr<LinearQuery> LinearQuery::Create(const MetricSpace& space,
                                                Matrix table) {
  if (table.cols() != space.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "query table has %d columns for a %d-point space", table.cols(),
        space.size()));
  }
  if (table.rows() == 0) {
    return absl::InvalidArgumentError("query has output dimension 0");
  }
  for (double v : table.data()) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("query table has a non-finite entry");
    }
  }
  return LinearQuery(std::move(table));
}

std::vector<double> LinearQuery::Evaluate(const Histogram& h) const {
  return MatVec(table_, h.mass());
}

absl::StatusOr<std::vector<double>> LinearQuery::Evaluate(
    const Multiset& data) const {
  absl::StatusOr<Histogram> h = data.Normalize();
  if (!h.ok()) return h.status();
  return Evaluate(*h);
}

absl::StatusOr<double> LipschitzConstant(const MetricSpace& space,
                                         const Matrix& table) {
  const size_t k = space.size();
  if (table.cols() != k) {
    return absl::InvalidArgumentError("query table does not match the space");
  }
  double best = 0.0;
  for (size_t x = 0; x < k; ++x) {
    for (size_t y = x + 1; y < k; ++y) {
      double sq = 0.0;
      for (size_t i = 0; i < table.rows(); ++i) {
        const double diff = table(i, x) - table(i, y);
        sq += diff * diff;
      }
      const double gap = std::sqrt(sq);
      const double d = space.distance(x, y);
      if (d <= 0.0) {
        if (gap > 0.0) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "unbounded Lipschitz constant: points %d and %d are at "
              "distance 0 with different values",
              x, y));
        }
        continue;
      }
      best = std::max(best, gap / d);
    }
  }
  return best;
}

absl::StatusOr<NoiseSpec> NoiseForBudget(NoiseKind kind,
                                         const MetricBudget& budget,
                                         double lipschitz) {
  if (!(budget.alpha > 0.0)) {
    return absl::InvalidArgumentError("alpha must be positive");
  }
  if (kind == NoiseKind::kGaussian && !(budget.delta > 0.0)) {
    return absl::InvalidArgumentError("Gaussian noise needs delta > 0");
  }
  NoiseSpec spec;
  spec.kind = kind;
  spec.omega = 1.0 / budget.alpha;
  spec.delta = budget.delta;
  spec.lipschitz = lipschitz;
  return spec;
}

double GaussianNoiseStd(double lipschitz, double omega, double delta) {
  return lipschitz * omega * std::sqrt(1.25 * std::log(1.0 / delta));
}

std::vector<double> SampleNoise(const NoiseSpec& noise, double omega,
                                size_t dim, RandomStream& rng) {
  std::vector<double> z(dim);
  if (noise.kind == NoiseKind::kGaussian) {
    const double sd = GaussianNoiseStd(noise.lipschitz, omega, noise.delta);
    for (double& v : z) v = sd * rng.Normal();
    return z;
  }
  // Direction: a normalized vector whose law is the cone measure of the
  // chosen unit sphere.
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : z) {
      if (noise.norm == BallNorm::kL2) {
        v = rng.Normal();
        norm += v * v;
      } else {
        v = rng.Laplace(1.0);
        norm += std::fabs(v);
      }
    }
    if (noise.norm == BallNorm::kL2) norm = std::sqrt(norm);
  } while (norm == 0.0);
  const double radius =
      noise.lipschitz * rng.Gamma(static_cast<double>(dim), omega);
  for (double& v : z) v *= radius / norm;
  return z;
}

absl::StatusOr<std::vector<double>> PrivEmdLinear(
    const MetricSpace& space, const LinearQuery& query, const Multiset& data,
    const NoiseSpec& noise, const LinearReleaseOptions& options,
    uint64_t seed) {
  if (!(noise.omega > 0.0) || !std::isfinite(noise.omega)) {
    return absl::InvalidArgumentError("noise scale omega must be positive");
  }
  if (!(noise.lipschitz >= 0.0)) {
    return absl::InvalidArgumentError("Lipschitz constant must be >= 0");
  }
  if (noise.kind == NoiseKind::kGaussian &&
      !(noise.delta > 0.0 && noise.delta < 1.0)) {
    return absl::InvalidArgumentError("Gaussian noise needs delta in (0, 1)");
  }
  if (options.model == TrustModel::kCentral && options.num_users < 1) {
    return absl::InvalidArgumentError("central model needs n >= 1 users");
  }
  if (!options.unchecked) {
    absl::StatusOr<double> exact = LipschitzConstant(space, query.table());
    if (!exact.ok()) return exact.status();
    if (noise.lipschitz < *exact * (1.0 - 1e-12)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "declared Lipschitz constant %g is below the exact value %g",
          noise.lipschitz, *exact));
    }
  }
  absl::StatusOr<std::vector<double>> value = query.Evaluate(data);
  if (!value.ok()) return value.status();
  const double omega = options.model == TrustModel::kCentral
                           ? noise.omega / static_cast<double>(options.num_users)
                           : noise.omega;
  RandomStream rng(seed);
  const std::vector<double> z = SampleNoise(noise, omega, query.dim(), rng);
  for (size_t i = 0; i < z.size(); ++i) (*value)[i] += z[i];
  return value;
}

absl::StatusOr<Matrix> ComposeEmbeddingQuery(const Matrix& f,
                                             const EmbeddingTable& embedding) {
  if (static_cast<int>(f.cols()) != embedding.dim) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "query has %d columns for embedding dimension %d", f.cols(),
        embedding.dim));
  }
  for (size_t i = 0; i < f.rows(); ++i) {
    const double norm = L2Norm(f.row(i));
    if (norm > 1.0 + 1e-12) {
      return absl::InvalidArgumentError(
          absl::StrFormat("query row %d has norm %g > 1", i, norm));
    }
  }
  const size_t k = embedding.vectors.size();
  Matrix phi(static_cast<size_t>(embedding.dim), k);
  for (size_t x = 0; x < k; ++x) {
    if (static_cast<int>(embedding.vectors[x].size()) != embedding.dim) {
      return absl::InvalidArgumentError("embedding vector has wrong length");
    }
    for (int i = 0; i < embedding.dim; ++i) phi(i, x) = embedding.vectors[x][i];
  }
  return f * phi;
}

absl::StatusOr<std::vector<double>> EmbeddingQuery(
    const Matrix& f, const EmbeddingTable& embedding, const Multiset& data) {
  absl::StatusOr<Matrix> composite = ComposeEmbeddingQuery(f, embedding);
  if (!composite.ok()) return composite.status();
  if (data.domain_size() != composite->cols()) {
    return absl::InvalidArgumentError("dataset does not match the embedding");
  }
  absl::StatusOr<Histogram> h = data.Normalize();
  if (!h.ok()) return h.status();
  return MatVec(*composite, h->mass());
}

double EmbeddingLipschitzBound(const Matrix& f, double normalization) {
  return SpectralNorm(f) * normalization;
}

double UserLevelSensitivity(const Matrix& table) {
  return 2.0 * OperatorNorm1To2(table);
}

absl::StatusOr<std::vector<double>> UserLevelGaussianBaseline(
    const LinearQuery& query, const Multiset& data, const UserBudget& budget,
    const LinearReleaseOptions& options, uint64_t seed) {
  if (!(budget.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (options.model == TrustModel::kCentral && options.num_users < 1) {
    return absl::InvalidArgumentError("central model needs n >= 1 users");
  }
  absl::StatusOr<std::vector<double>> value = query.Evaluate(data);
  if (!value.ok()) return value.status();
  NoiseSpec noise;
  noise.kind = NoiseKind::kGaussian;
  noise.delta = budget.delta;
  noise.lipschitz = UserLevelSensitivity(query.table());
  double omega = 1.0 / budget.epsilon;
  if (options.model == TrustModel::kCentral) {
    omega /= static_cast<double>(options.num_users);
  }
  RandomStream rng(seed);
  const std::vector<double> z = SampleNoise(noise, omega, query.dim(), rng);
  for (size_t i = 0; i < z.size(); ++i) (*value)[i] += z[i];
  return value;
}

}  // namespace emdp
