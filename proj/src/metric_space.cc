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

#include "emdp/metric_space.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace emdp {

absl::Status ValidateMetric(size_t k, const std::vector<double>& dist,
                            double tolerance) {
  if (k == 0) return absl::InvalidArgumentError("metric space is empty");
  if (dist.size() != k * k) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distance table has %d entries, expected %d", dist.size(), k * k));
  }
  auto d = [&](size_t x, size_t y) { return dist[x * k + y]; };
  for (size_t x = 0; x < k; ++x) {
    if (std::fabs(d(x, x)) > tolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("dist(%d,%d) = %g is not zero", x, x, d(x, x)));
    }
    for (size_t y = 0; y < k; ++y) {
      if (!std::isfinite(d(x, y)) || d(x, y) < -tolerance) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "dist(%d,%d) = %g is not a nonnegative number", x, y, d(x, y)));
      }
      if (d(x, y) > 1.0 + tolerance) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "dist(%d,%d) = %g exceeds 1 (not normalized)", x, y, d(x, y)));
      }
      if (std::fabs(d(x, y) - d(y, x)) > tolerance) {
        return absl::InvalidArgumentError(
            absl::StrFormat("dist(%d,%d) != dist(%d,%d)", x, y, y, x));
      }
    }
  }
  for (size_t z = 0; z < k; ++z) {
    for (size_t x = 0; x < k; ++x) {
      const double xz = d(x, z);
      for (size_t y = 0; y < k; ++y) {
        if (d(x, y) > xz + d(z, y) + tolerance) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "triangle inequality fails for (%d,%d) through %d", x, y, z));
        }
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<MetricSpace> MetricSpace::Create(size_t k,
                                                std::vector<double> dist) {
  if (absl::Status s = ValidateMetric(k, dist); !s.ok()) return s;
  return MetricSpace(k, std::move(dist));
}

MetricSpace MetricSpace::Discrete(size_t k) {
  std::vector<double> dist(k * k, 1.0);
  for (size_t x = 0; x < k; ++x) dist[x * k + x] = 0.0;
  return MetricSpace(k, std::move(dist));
}

double MetricSpace::Diameter() const {
  double best = 0.0;
  for (double v : dist_) best = std::max(best, v);
  return best;
}

absl::StatusOr<MetricSpace> BuildClustered(int s, int t, double r) {
  if (s < 1 || t < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "clustered space needs s >= 1 and t >= 1, got s=%d t=%d", s, t));
  }
  if (!(r > 0.0 && r < 0.5)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "intra-cluster distance r must lie in (0, 1/2), got %g", r));
  }
  const ClusteredSpace shape{s, t, r};
  const size_t k = static_cast<size_t>(shape.size());
  std::vector<double> dist(k * k, 1.0);
  for (size_t x = 0; x < k; ++x) {
    for (size_t y = 0; y < k; ++y) {
      if (x == y) {
        dist[x * k + y] = 0.0;
      } else if (shape.ClusterOf(x) == shape.ClusterOf(y)) {
        dist[x * k + y] = r;
      }
    }
  }
  MetricSpace space(k, std::move(dist));
  space.clustered_ = shape;
  return space;
}

absl::StatusOr<MetricSpace> BuildClustered(const ClusteredSpace& shape) {
  return BuildClustered(shape.s, shape.t, shape.r);
}

absl::StatusOr<EmbeddedSpace> BuildEmbedding(const EmbeddingTable& table) {
  const size_t k = table.vectors.size();
  if (k < 2) {
    return absl::InvalidArgumentError("embedding needs at least 2 vectors");
  }
  for (const auto& v : table.vectors) {
    if (static_cast<int>(v.size()) != table.dim) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "embedding vector has length %d, expected %d", v.size(), table.dim));
    }
  }
  std::vector<double> dist(k * k, 0.0);
  double diameter = 0.0;
  for (size_t x = 0; x < k; ++x) {
    for (size_t y = x + 1; y < k; ++y) {
      double sq = 0.0;
      for (int i = 0; i < table.dim; ++i) {
        const double diff = table.vectors[x][i] - table.vectors[y][i];
        sq += diff * diff;
      }
      const double e = std::sqrt(sq);
      dist[x * k + y] = dist[y * k + x] = e;
      diameter = std::max(diameter, e);
    }
  }
  if (!(diameter > 0.0)) {
    return absl::InvalidArgumentError(
        "all embedding vectors are identical (zero diameter)");
  }
  for (double& v : dist) v /= diameter;
  return EmbeddedSpace{MetricSpace(k, std::move(dist)), diameter};
}

std::string FormatClustered(const ClusteredSpace& shape) {
  return absl::StrFormat("clustered s=%d t=%d r=%.17g\n", shape.s, shape.t,
                         shape.r);
}

std::string FormatMetricSpace(const MetricSpace& space) {
  if (space.clustered().has_value()) {
    return FormatClustered(*space.clustered());
  }
  std::string out = absl::StrFormat("metric k=%d\n", space.size());
  for (size_t x = 0; x < space.size(); ++x) {
    for (size_t y = 0; y < space.size(); ++y) {
      absl::StrAppendFormat(&out, "%s%.17g", y == 0 ? "" : " ",
                            space.distance(x, y));
    }
    out += "\n";
  }
  return out;
}

namespace {

// Parses "key=value" into `value` when the key matches.
bool ParseField(absl::string_view token, absl::string_view key,
                std::string* value) {
  if (!absl::ConsumePrefix(&token, key)) return false;
  if (!absl::ConsumePrefix(&token, "=")) return false;
  *value = std::string(token);
  return true;
}

absl::StatusOr<MetricSpace> ParseClusteredHeader(
    const std::vector<std::string>& tokens) {
  std::string s_str, t_str, r_str;
  for (size_t i = 1; i < tokens.size(); ++i) {
    if (ParseField(tokens[i], "s", &s_str)) continue;
    if (ParseField(tokens[i], "t", &t_str)) continue;
    ParseField(tokens[i], "r", &r_str);
  }
  int s = 0;
  int t = 0;
  double r = 0;
  if (!absl::SimpleAtoi(s_str, &s) || !absl::SimpleAtoi(t_str, &t) ||
      !absl::SimpleAtod(r_str, &r)) {
    return absl::InvalidArgumentError(
        "malformed clustered header; expected `clustered s=<s> t=<t> r=<r>`");
  }
  return BuildClustered(s, t, r);
}

}  // namespace

absl::StatusOr<MetricSpace> ParseMetricSpace(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  while (std::getline(in, header)) {
    if (!absl::StripAsciiWhitespace(header).empty()) break;
  }
  std::vector<std::string> tokens =
      absl::StrSplit(header, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
  if (tokens.empty()) return absl::InvalidArgumentError("empty metric file");
  if (tokens[0] == "clustered") return ParseClusteredHeader(tokens);
  if (tokens[0] != "metric" || tokens.size() < 2) {
    return absl::InvalidArgumentError(
        "metric file must start with `metric k=<n>` or `clustered ...`");
  }
  std::string k_str;
  size_t k = 0;
  if (!ParseField(tokens[1], "k", &k_str) || !absl::SimpleAtoi(k_str, &k) ||
      k == 0) {
    return absl::InvalidArgumentError("malformed `metric k=<n>` header");
  }
  std::vector<double> dist;
  dist.reserve(k * k);
  std::string line;
  size_t rows = 0;
  while (rows < k && std::getline(in, line)) {
    std::vector<absl::string_view> cells =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r,"), absl::SkipEmpty());
    if (cells.empty()) continue;
    if (cells.size() != k) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d has %d entries, expected %d", rows, cells.size(), k));
    }
    for (absl::string_view cell : cells) {
      double v;
      if (!absl::SimpleAtod(cell, &v)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("bad distance `%s` in row %d", cell, rows));
      }
      dist.push_back(v);
    }
    ++rows;
  }
  if (rows != k) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected %d distance rows, found %d", k, rows));
  }
  return MetricSpace::Create(k, std::move(dist));
}

absl::StatusOr<MetricSpace> LoadMetricSpace(const std::string& spec) {
  absl::string_view view = spec;
  if (absl::ConsumePrefix(&view, "clustered:")) {
    std::vector<absl::string_view> parts = absl::StrSplit(view, ',');
    int s = 0;
    int t = 0;
    double r = 0;
    if (parts.size() != 3 || !absl::SimpleAtoi(parts[0], &s) ||
        !absl::SimpleAtoi(parts[1], &t) || !absl::SimpleAtod(parts[2], &r)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("bad space spec `%s`; expected clustered:s,t,r",
                          spec));
    }
    return BuildClustered(s, t, r);
  }
  if (absl::ConsumePrefix(&view, "discrete:")) {
    size_t k = 0;
    if (!absl::SimpleAtoi(view, &k) || k == 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("bad space spec `%s`; expected discrete:k", spec));
    }
    return MetricSpace::Discrete(k);
  }
  std::ifstream file(spec);
  if (!file) {
    return absl::NotFoundError(absl::StrFormat("cannot open `%s`", spec));
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return ParseMetricSpace(buffer.str());
}

}  // namespace emdp
