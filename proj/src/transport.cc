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

#include "emdp/transport.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "emdp/random.h"

namespace emdp {
namespace {

constexpr double kMassTolerance = 1e-12;
// Flows below this are treated as zero by the solver.
constexpr double kFlowEpsilon = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

absl::StatusOr<Histogram> Histogram::Create(std::vector<double> mass) {
  if (mass.empty()) return absl::InvalidArgumentError("histogram is empty");
  double total = 0.0;
  for (size_t x = 0; x < mass.size(); ++x) {
    if (!std::isfinite(mass[x]) || mass[x] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("histogram entry %d = %g is negative", x, mass[x]));
    }
    total += mass[x];
  }
  if (std::fabs(total - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("histogram sums to %.17g, expected 1", total));
  }
  return Histogram(std::move(mass));
}

Histogram Histogram::PointMass(size_t k, size_t x) {
  std::vector<double> mass(k, 0.0);
  mass[x] = 1.0;
  return Histogram(std::move(mass));
}

Multiset::Multiset(std::vector<int64_t> counts) : counts_(std::move(counts)) {
  for (int64_t c : counts_) size_ += c;
}

absl::StatusOr<Multiset> Multiset::FromItems(size_t k,
                                             std::span<const size_t> items) {
  std::vector<int64_t> counts(k, 0);
  for (size_t x : items) {
    if (x >= k) {
      return absl::OutOfRangeError(
          absl::StrFormat("item %d outside a %d-point space", x, k));
    }
    ++counts[x];
  }
  return Multiset(std::move(counts));
}

std::vector<size_t> Multiset::Items() const {
  std::vector<size_t> items;
  items.reserve(size_);
  for (size_t x = 0; x < counts_.size(); ++x) {
    items.insert(items.end(), counts_[x], x);
  }
  return items;
}

absl::StatusOr<Histogram> Multiset::Normalize() const {
  if (size_ <= 0) {
    return absl::FailedPreconditionError("cannot normalize an empty multiset");
  }
  std::vector<double> mass(counts_.size());
  for (size_t x = 0; x < counts_.size(); ++x) {
    mass[x] = static_cast<double>(counts_[x]) / static_cast<double>(size_);
  }
  return Histogram(std::move(mass));
}

void Multiset::Add(size_t x, int64_t times) {
  counts_[x] += times;
  size_ += times;
}

absl::StatusOr<Multiset> Pool(std::span<const Multiset> users) {
  if (users.empty()) return absl::InvalidArgumentError("no datasets to pool");
  const size_t k = users.front().domain_size();
  std::vector<int64_t> counts(k, 0);
  for (const Multiset& u : users) {
    if (u.domain_size() != k) {
      return absl::InvalidArgumentError("datasets live on different spaces");
    }
    for (size_t x = 0; x < k; ++x) counts[x] += u.count(x);
  }
  return Multiset(std::move(counts));
}

std::vector<double> Coupling::FirstMarginal() const {
  std::vector<double> m(k_, 0.0);
  for (size_t x = 0; x < k_; ++x) {
    for (size_t y = 0; y < k_; ++y) m[x] += (*this)(x, y);
  }
  return m;
}

std::vector<double> Coupling::SecondMarginal() const {
  std::vector<double> m(k_, 0.0);
  for (size_t x = 0; x < k_; ++x) {
    for (size_t y = 0; y < k_; ++y) m[y] += (*this)(x, y);
  }
  return m;
}

double Coupling::Cost(const MetricSpace& space) const {
  double cost = 0.0;
  for (size_t x = 0; x < k_; ++x) {
    for (size_t y = 0; y < k_; ++y) {
      cost += (*this)(x, y) * space.distance(x, y);
    }
  }
  return cost;
}

absl::Status Coupling::Validate(const Histogram& p, const Histogram& q,
                                double tolerance) const {
  if (p.size() != k_ || q.size() != k_) {
    return absl::InvalidArgumentError("coupling and histograms differ in size");
  }
  for (double v : joint_) {
    if (v < -tolerance) {
      return absl::InvalidArgumentError("coupling has a negative entry");
    }
  }
  const std::vector<double> first = FirstMarginal();
  const std::vector<double> second = SecondMarginal();
  for (size_t x = 0; x < k_; ++x) {
    if (std::fabs(first[x] - p[x]) > tolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d sums to %g, expected %g", x, first[x], p[x]));
    }
    if (std::fabs(second[x] - q[x]) > tolerance) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "column %d sums to %g, expected %g", x, second[x], q[x]));
    }
  }
  return absl::OkStatus();
}

// Successive shortest paths on the transportation network
//   S -> row x (capacity p[x]) -> col y (cost d(x,y)) -> T (capacity q[y]).
// Node layout: rows 0..k-1, cols k..2k-1, S = 2k, T = 2k+1. Dijkstra runs on
// reduced costs with dense O(V^2) scans, which is the right trade-off for a
// complete bipartite graph.
absl::StatusOr<EmdResult> Emd(const MetricSpace& space, const Histogram& p,
                              const Histogram& q) {
  const size_t k = space.size();
  if (p.size() != k || q.size() != k) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "histograms of size %d and %d on a %d-point space", p.size(), q.size(),
        k));
  }
  std::vector<double> supply = p.mass();
  std::vector<double> demand = q.mass();
  // Absorb the mass-balance slack into the largest demand bin.
  const double slack = std::accumulate(supply.begin(), supply.end(), 0.0) -
                       std::accumulate(demand.begin(), demand.end(), 0.0);
  auto largest = std::max_element(demand.begin(), demand.end());
  *largest = std::max(0.0, *largest + slack);

  const size_t n = 2 * k + 2;
  const size_t src = 2 * k;
  const size_t sink = 2 * k + 1;
  std::vector<double> flow(k * k, 0.0);
  std::vector<double> used_supply(k, 0.0);
  std::vector<double> used_demand(k, 0.0);
  std::vector<double> pot(n, 0.0);
  std::vector<double> dist(n);
  std::vector<size_t> parent(n);
  std::vector<char> done(n);

  // Reduced-cost residual arc u -> v, or +inf when absent.
  auto arc = [&](size_t u, size_t v) -> double {
    double cost = kInf;
    if (u == src && v < k) {
      if (supply[v] > kFlowEpsilon) cost = 0.0;
    } else if (u < k && v == src) {
      if (used_supply[u] > kFlowEpsilon) cost = 0.0;
    } else if (u < k && v >= k && v < 2 * k) {
      cost = space.distance(u, v - k);
    } else if (u >= k && u < 2 * k && v < k) {
      if (flow[v * k + (u - k)] > kFlowEpsilon) {
        cost = -space.distance(v, u - k);
      }
    } else if (u >= k && u < 2 * k && v == sink) {
      if (demand[u - k] > kFlowEpsilon) cost = 0.0;
    } else if (u == sink && v >= k && v < 2 * k) {
      if (used_demand[v - k] > kFlowEpsilon) cost = 0.0;
    }
    if (cost == kInf) return kInf;
    return std::max(0.0, cost + pot[u] - pot[v]);
  };

  const size_t max_rounds = 4 * k * k + 64;
  size_t round = 0;
  for (;; ++round) {
    double remaining = 0.0;
    for (double s : supply) remaining += s;
    if (remaining <= kFlowEpsilon * static_cast<double>(k)) break;
    if (round >= max_rounds) {
      return absl::InternalError("transport solver did not converge");
    }
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    dist[src] = 0.0;
    for (;;) {
      size_t u = n;
      for (size_t v = 0; v < n; ++v) {
        if (!done[v] && dist[v] < kInf && (u == n || dist[v] < dist[u])) u = v;
      }
      if (u == n) break;
      done[u] = 1;
      for (size_t v = 0; v < n; ++v) {
        if (done[v]) continue;
        const double c = arc(u, v);
        if (c == kInf) continue;
        if (dist[u] + c < dist[v]) {
          dist[v] = dist[u] + c;
          parent[v] = u;
        }
      }
    }
    if (dist[sink] == kInf) {
      // Only reachable when the slack absorption failed to balance masses.
      break;
    }
    // Bottleneck along the path.
    double push = kInf;
    for (size_t v = sink; v != src; v = parent[v]) {
      const size_t u = parent[v];
      if (u == src) {
        push = std::min(push, supply[v]);
      } else if (v == src) {
        push = std::min(push, used_supply[u]);
      } else if (v == sink) {
        push = std::min(push, demand[u - k]);
      } else if (u == sink) {
        push = std::min(push, used_demand[v - k]);
      } else if (u >= k && v < k) {
        push = std::min(push, flow[v * k + (u - k)]);
      }
    }
    for (size_t v = sink; v != src; v = parent[v]) {
      const size_t u = parent[v];
      if (u == src) {
        supply[v] -= push;
        used_supply[v] += push;
      } else if (v == src) {
        used_supply[u] -= push;
        supply[u] += push;
      } else if (v == sink) {
        demand[u - k] -= push;
        used_demand[u - k] += push;
      } else if (u == sink) {
        used_demand[v - k] -= push;
        demand[v - k] += push;
      } else if (u < k) {
        flow[u * k + (v - k)] += push;
      } else {
        flow[v * k + (u - k)] -= push;
      }
    }
    const double reach = dist[sink];
    for (size_t v = 0; v < n; ++v) pot[v] += std::min(dist[v], reach);
  }

  EmdResult result;
  result.plan = Coupling(k);
  for (size_t x = 0; x < k; ++x) {
    for (size_t y = 0; y < k; ++y) {
      result.plan(x, y) = std::max(0.0, flow[x * k + y]);
    }
  }
  result.cost = std::clamp(result.plan.Cost(space), 0.0, 1.0);
  return result;
}

absl::StatusOr<double> EmdCost(const MetricSpace& space, const Histogram& p,
                               const Histogram& q) {
  absl::StatusOr<EmdResult> r = Emd(space, p, q);
  if (!r.ok()) return r.status();
  return r->cost;
}

// Hungarian method with row/column potentials, O(n^3).
std::vector<size_t> SolveAssignment(size_t n, std::span<const double> cost) {
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (size_t i = 1; i <= n; ++i) {
    match[0] = i;
    size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const size_t i0 = match[j0];
      double delta = kInf;
      size_t j1 = 0;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<size_t> assignment(n);
  for (size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

absl::StatusOr<Matching> BvnMatching(const MetricSpace& space,
                                     const Multiset& k1, const Multiset& k2) {
  if (k1.domain_size() != space.size() || k2.domain_size() != space.size()) {
    return absl::InvalidArgumentError("multisets do not match the space");
  }
  if (k1.size() != k2.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "multisets have different sizes %d and %d", k1.size(), k2.size()));
  }
  if (k1.empty()) return absl::InvalidArgumentError("multisets are empty");
  Matching m;
  m.left = k1.Items();
  m.right = k2.Items();
  const size_t n = m.left.size();
  std::vector<double> cost(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      cost[i * n + j] = space.distance(m.left[i], m.right[j]);
    }
  }
  m.permutation = SolveAssignment(n, cost);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) total += cost[i * n + m.permutation[i]];
  m.cost = total / static_cast<double>(n);
  return m;
}

absl::StatusOr<std::vector<std::pair<size_t, size_t>>> SampleCoupling(
    const Coupling& plan, int64_t count, uint64_t seed) {
  if (count < 0) {
    return absl::InvalidArgumentError("sample count must be nonnegative");
  }
  std::vector<std::pair<size_t, size_t>> pairs;
  if (count == 0) return pairs;
  const size_t k = plan.size();
  std::vector<double> cumulative(k * k);
  double acc = 0.0;
  for (size_t i = 0; i < k * k; ++i) {
    acc += std::max(0.0, plan.joint()[i]);
    cumulative[i] = acc;
  }
  if (!(acc > 0.0)) return absl::InvalidArgumentError("coupling has no mass");
  RandomStream rng(seed);
  pairs.reserve(count);
  for (int64_t i = 0; i < count; ++i) {
    const size_t cell = rng.DiscreteFromCumulative(cumulative);
    pairs.emplace_back(cell / k, cell % k);
  }
  return pairs;
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

absl::StatusOr<CsvTable> ReadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open `%s`", path));
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> cells = absl::StrSplit(view, ',');
    for (std::string& c : cells) c = std::string(absl::StripAsciiWhitespace(c));
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) {
    return absl::InvalidArgumentError(absl::StrFormat("`%s` is empty", path));
  }
  return table;
}

int ColumnIndex(const CsvTable& table, absl::string_view name) {
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

absl::Status ParseCell(const std::vector<std::string>& row, int column,
                       size_t line, int64_t* out) {
  if (column >= static_cast<int>(row.size()) ||
      !absl::SimpleAtoi(row[column], out)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bad integer in data row %d", line + 1));
  }
  return absl::OkStatus();
}

// Adds one CSV row (point and optional count) to `target`.
absl::Status AddRow(const std::vector<std::string>& row, int point_col,
                    int count_col, size_t line, size_t k, Multiset* target) {
  int64_t point = 0;
  if (absl::Status s = ParseCell(row, point_col, line, &point); !s.ok()) {
    return s;
  }
  int64_t count = 1;
  if (count_col >= 0) {
    if (absl::Status s = ParseCell(row, count_col, line, &count); !s.ok()) {
      return s;
    }
  }
  if (point < 0 || static_cast<size_t>(point) >= k) {
    return absl::OutOfRangeError(absl::StrFormat(
        "point_index %d in data row %d outside a %d-point space", point,
        line + 1, k));
  }
  if (count < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("negative count in data row %d", line + 1));
  }
  target->Add(static_cast<size_t>(point), count);
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Multiset> ReadMultisetCsv(const std::string& path, size_t k) {
  absl::StatusOr<CsvTable> table = ReadCsv(path);
  if (!table.ok()) return table.status();
  const int point_col = ColumnIndex(*table, "point_index");
  if (point_col < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("`%s` has no point_index column", path));
  }
  const int count_col = ColumnIndex(*table, "count");
  Multiset result(std::vector<int64_t>(k, 0));
  for (size_t i = 0; i < table->rows.size(); ++i) {
    absl::Status s =
        AddRow(table->rows[i], point_col, count_col, i, k, &result);
    if (!s.ok()) return s;
  }
  return result;
}

absl::StatusOr<std::vector<Multiset>> ReadUsersCsv(const std::string& path,
                                                   size_t k) {
  absl::StatusOr<CsvTable> table = ReadCsv(path);
  if (!table.ok()) return table.status();
  const int user_col = ColumnIndex(*table, "user_id");
  const int point_col = ColumnIndex(*table, "point_index");
  if (user_col < 0 || point_col < 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "`%s` needs user_id and point_index columns", path));
  }
  const int count_col = ColumnIndex(*table, "count");
  std::map<int64_t, Multiset> users;
  for (size_t i = 0; i < table->rows.size(); ++i) {
    int64_t user = 0;
    if (absl::Status s = ParseCell(table->rows[i], user_col, i, &user);
        !s.ok()) {
      return s;
    }
    auto [it, inserted] =
        users.try_emplace(user, std::vector<int64_t>(k, 0));
    absl::Status s =
        AddRow(table->rows[i], point_col, count_col, i, k, &it->second);
    if (!s.ok()) return s;
  }
  std::vector<Multiset> out;
  out.reserve(users.size());
  for (auto& [id, dataset] : users) out.push_back(std::move(dataset));
  return out;
}

}  // namespace emdp
