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

#include "emdp/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "emdp/frequency.h"
#include "emdp/linear_mech.h"
#include "emdp/metric_space.h"
#include "emdp/random.h"
#include "emdp/transport.h"

namespace emdp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Tag mixed into data-generation substreams.
constexpr uint64_t kDataStream = 0xDA7A;

enum class Section { kNone, kScenario, kGrid, kBudget };

absl::Status ParseError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrFormat("config line %d: %s", line, message));
}

absl::StatusOr<std::vector<int64_t>> ParseIntList(absl::string_view value) {
  std::vector<int64_t> out;
  for (absl::string_view part :
       absl::StrSplit(value, ',', absl::SkipWhitespace())) {
    double v = 0;
    // Accept 1e4-style literals for convenience.
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(part), &v) ||
        v != std::floor(v) || v < 0 || v > 9e15) {
      return absl::InvalidArgumentError(
          absl::StrFormat("`%s` is not a nonnegative integer", part));
    }
    out.push_back(static_cast<int64_t>(v));
  }
  if (out.empty()) return absl::InvalidArgumentError("empty list");
  return out;
}

absl::Status SetScenarioKey(Scenario& sc, absl::string_view key,
                            absl::string_view value) {
  if (key == "name") {
    sc.name = std::string(value);
  } else if (key == "kind") {
    if (value == "frequency") {
      sc.kind = ScenarioKind::kFrequency;
    } else if (value == "linear") {
      sc.kind = ScenarioKind::kLinear;
    } else {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown kind `%s`", value));
    }
  } else if (key == "mechanisms") {
    sc.mechanisms.clear();
    for (absl::string_view part :
         absl::StrSplit(value, ',', absl::SkipWhitespace())) {
      sc.mechanisms.emplace_back(absl::StripAsciiWhitespace(part));
    }
  } else if (key == "model") {
    if (value == "local") {
      sc.model = TrustModel::kLocal;
    } else if (value == "central") {
      sc.model = TrustModel::kCentral;
    } else {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown model `%s`", value));
    }
  } else if (key == "calibration") {
    if (value == "fixed") {
      sc.calibration = Calibration::kFixed;
    } else if (value == "exact") {
      sc.calibration = Calibration::kExact;
    } else if (value == "asymptotic") {
      sc.calibration = Calibration::kAsymptotic;
    } else {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown calibration `%s`", value));
    }
  } else if (key == "space") {
    sc.space = std::string(value);
  } else if (key == "dim") {
    if (!absl::SimpleAtoi(value, &sc.dim) || sc.dim < 1) {
      return absl::InvalidArgumentError("dim must be a positive integer");
    }
  } else if (key == "trials") {
    if (!absl::SimpleAtoi(value, &sc.trials) || sc.trials < 0) {
      return absl::InvalidArgumentError("trials must be >= 0");
    }
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown scenario key `%s`", key));
  }
  return absl::OkStatus();
}

absl::Status SetGridKey(Scenario& sc, absl::string_view key,
                        absl::string_view value) {
  absl::StatusOr<std::vector<int64_t>> list = ParseIntList(value);
  if (!list.ok()) return list.status();
  for (int64_t v : *list) {
    if (v < 1) return absl::InvalidArgumentError("grid values must be >= 1");
  }
  if (key == "n") {
    sc.n_values = *std::move(list);
  } else if (key == "m") {
    sc.m_values = *std::move(list);
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown grid key `%s`", key));
  }
  return absl::OkStatus();
}

absl::Status SetBudgetKey(Scenario& sc, absl::string_view key,
                          absl::string_view value) {
  double v = 0;
  if (!absl::SimpleAtod(value, &v) || !std::isfinite(v) || v < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("`%s` is not a nonnegative number", value));
  }
  if (key == "alpha0") {
    sc.alpha0 = v;
  } else if (key == "alpha") {
    sc.alpha = v;
  } else if (key == "epsilon") {
    sc.epsilon = v;
  } else if (key == "delta") {
    if (!(v > 0 && v < 1)) {
      return absl::InvalidArgumentError("delta must lie in (0, 1)");
    }
    sc.delta = v;
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown budget key `%s`", key));
  }
  return absl::OkStatus();
}

// Users with m items each, drawn i.i.d. with weight 1/(x+1) on point x.
std::vector<Multiset> MakeUsers(size_t k, int64_t n, int64_t m,
                                uint64_t master, uint64_t scenario_index) {
  std::vector<double> weights(k);
  for (size_t x = 0; x < k; ++x) weights[x] = 1.0 / (x + 1.0);
  std::vector<Multiset> users;
  users.reserve(n);
  for (int64_t u = 0; u < n; ++u) {
    RandomStream rng = RandomStream::Derive(
        master, {kDataStream, scenario_index, static_cast<uint64_t>(n),
                 static_cast<uint64_t>(m), static_cast<uint64_t>(u)});
    Multiset data(std::vector<int64_t>(k, 0));
    for (int64_t i = 0; i < m; ++i) data.Add(rng.Discrete(weights));
    users.push_back(std::move(data));
  }
  return users;
}

struct Cell {
  size_t scenario = 0;
  std::string mechanism;
  int64_t n = 0;
  int64_t m = 0;
  uint64_t seed = 0;
};

struct TrialStats {
  double mean = 0.0;
  double sd = 0.0;
};

TrialStats Summarize(const std::vector<double>& errors) {
  TrialStats st;
  if (errors.empty()) return st;
  for (double e : errors) st.mean += e;
  st.mean /= static_cast<double>(errors.size());
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - st.mean) * (e - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(errors.size() - 1));
  }
  return st;
}

uint64_t TrialSeed(uint64_t cell_seed, int64_t trial) {
  return RandomStream::Derive(cell_seed, {static_cast<uint64_t>(trial)})
      .NextU64();
}

const char* CalibrationName(Calibration c) {
  switch (c) {
    case Calibration::kFixed:
      return "fixed";
    case Calibration::kExact:
      return "exact";
    case Calibration::kAsymptotic:
      return "asymptotic";
  }
  return "fixed";
}

// Runs trials of a frequency estimator; `estimate` maps a trial seed to a
// raw estimate over the space.
template <typename Estimate>
absl::StatusOr<TrialStats> RunFrequencyTrials(const MetricSpace& space,
                                              const Histogram& truth,
                                              int64_t trials, uint64_t seed,
                                              Estimate&& estimate) {
  std::vector<double> errors;
  errors.reserve(trials);
  for (int64_t t = 0; t < trials; ++t) {
    absl::StatusOr<std::vector<double>> raw = estimate(TrialSeed(seed, t));
    if (!raw.ok()) return raw.status();
    absl::StatusOr<double> err = EmdCost(space, ClampToSimplex(*raw), truth);
    if (!err.ok()) return err.status();
    errors.push_back(*err);
  }
  return Summarize(errors);
}

absl::Status RunFrequencyCell(const Scenario& sc, const Cell& cell,
                              uint64_t master, ExperimentRow& row) {
  absl::StatusOr<MetricSpace> space = LoadMetricSpace(sc.space);
  if (!space.ok()) return space.status();
  const size_t k = space->size();
  row.k = static_cast<int64_t>(k);
  const std::vector<Multiset> users =
      MakeUsers(k, cell.n, cell.m, master, cell.scenario);
  absl::StatusOr<Multiset> pooled = Pool(users);
  if (!pooled.ok()) return pooled.status();
  const Histogram truth = *pooled->Normalize();
  const std::optional<ClusteredSpace>& shape = space->clustered();

  if (cell.mechanism == "gkrr") {
    if (!shape.has_value()) {
      return absl::InvalidArgumentError("gkrr needs a clustered space");
    }
    double alpha0 = sc.alpha0;
    row.alpha = sc.alpha;
    if (sc.calibration == Calibration::kFixed) {
      absl::StatusOr<AmplificationResult> eff = EffectiveBudget(
          alpha0, sc.delta, cell.m, cell.n, sc.model);
      row.alpha = eff.ok() ? eff->alpha_eff : kNaN;
    } else {
      absl::StatusOr<double> calibrated = CalibrateAlpha0(
          MetricBudget{sc.alpha, sc.delta}, cell.m, cell.n, sc.model,
          sc.calibration == Calibration::kExact ? CalibrationMode::kExact
                                                : CalibrationMode::kAsymptotic);
      if (!calibrated.ok()) {
        row.status = absl::StrCat("skipped: ", calibrated.status().message());
        return absl::OkStatus();
      }
      alpha0 = *calibrated;
    }
    absl::StatusOr<GkrrParams> params =
        GkrrParams::Create(shape->s, shape->t, shape->r, alpha0);
    if (!params.ok()) return params.status();
    absl::StatusOr<TransitionMechanism> mech = GkrrMechanism(*params);
    if (!mech.ok()) return mech.status();
    absl::StatusOr<Matrix> inverse = GkrrRightInverse(*params);
    if (!inverse.ok()) {
      row.status = absl::StrCat("skipped: ", inverse.status().message());
      return absl::OkStatus();
    }
    absl::StatusOr<FreqBound> bound =
        FreqErrorBound(*inverse, *shape, cell.m, cell.n);
    if (!bound.ok()) return bound.status();
    row.bound = bound->value;
    std::vector<Multiset> reporters;
    if (sc.model == TrustModel::kCentral) {
      reporters.push_back(*pooled);
    }
    const std::span<const Multiset> input =
        sc.model == TrustModel::kCentral ? std::span<const Multiset>(reporters)
                                         : std::span<const Multiset>(users);
    absl::StatusOr<TrialStats> stats = RunFrequencyTrials(
        *space, truth, sc.trials, cell.seed, [&](uint64_t seed) {
          return FreqEstLocal(input, *mech, *inverse, seed);
        });
    if (!stats.ok()) return stats.status();
    row.mean_error = stats->mean;
    row.std_error = stats->sd;
    return absl::OkStatus();
  }

  if (cell.mechanism == "hadamard") {
    row.epsilon = sc.epsilon;
    absl::StatusOr<double> eps0 =
        HadamardItemBudget(sc.epsilon, cell.m, sc.delta);
    if (!eps0.ok()) return eps0.status();
    absl::StatusOr<HadamardResponse> hr =
        BuildHadamardResponse(static_cast<int>(k), *eps0);
    if (!hr.ok()) return hr.status();
    row.bound = kNaN;
    if (shape.has_value()) {
      absl::StatusOr<FreqBound> bound =
          FreqErrorBound(hr->inverse, *shape, cell.m, cell.n);
      if (bound.ok()) row.bound = bound->value;
    }
    absl::StatusOr<TrialStats> stats = RunFrequencyTrials(
        *space, truth, sc.trials, cell.seed, [&](uint64_t seed) {
          return FreqEstLocal(users, hr->mechanism, hr->inverse, seed);
        });
    if (!stats.ok()) return stats.status();
    row.mean_error = stats->mean;
    row.std_error = stats->sd;
    return absl::OkStatus();
  }

  if (cell.mechanism == "laplace") {
    row.epsilon = sc.epsilon;
    row.bound = static_cast<double>(k) /
                (static_cast<double>(cell.n) * sc.epsilon);
    absl::StatusOr<TrialStats> stats = RunFrequencyTrials(
        *space, truth, sc.trials, cell.seed,
        [&](uint64_t seed) -> absl::StatusOr<std::vector<double>> {
          absl::StatusOr<LaplaceEstimate> est =
              LaplaceFreqCentral(*pooled, cell.n, sc.epsilon, seed);
          if (!est.ok()) return est.status();
          return est->raw;
        });
    if (!stats.ok()) return stats.status();
    row.mean_error = stats->mean;
    row.std_error = stats->sd;
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown frequency mechanism `%s`", cell.mechanism));
}

absl::Status RunLinearCell(const Scenario& sc, const Cell& cell,
                           uint64_t master, ExperimentRow& row) {
  const int dim = sc.dim;
  EmbeddingTable table;
  table.dim = dim;
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> v(dim, 0.0);
      v[i] = sign;
      table.vectors.push_back(std::move(v));
    }
  }
  absl::StatusOr<EmbeddedSpace> embedded = BuildEmbedding(table);
  if (!embedded.ok()) return embedded.status();
  const MetricSpace& space = embedded->space;
  const size_t k = space.size();
  row.k = static_cast<int64_t>(k);
  absl::StatusOr<Matrix> f = ComposeEmbeddingQuery(Matrix::Identity(dim), table);
  if (!f.ok()) return f.status();
  absl::StatusOr<LinearQuery> query = LinearQuery::Create(space, *f);
  if (!query.ok()) return query.status();

  const std::vector<Multiset> users =
      MakeUsers(k, cell.n, cell.m, master, cell.scenario);
  const bool central = sc.model == TrustModel::kCentral;
  absl::StatusOr<Multiset> pooled = Pool(users);
  if (!pooled.ok()) return pooled.status();
  const Multiset& data = central ? *pooled : users.front();
  absl::StatusOr<std::vector<double>> truth = query->Evaluate(data);
  if (!truth.ok()) return truth.status();

  LinearReleaseOptions opts;
  opts.model = sc.model;
  opts.num_users = cell.n;
  const double users_scale = central ? static_cast<double>(cell.n) : 1.0;
  std::function<absl::StatusOr<std::vector<double>>(uint64_t)> release;
  NoiseSpec noise;
  if (cell.mechanism == "gaussian" || cell.mechanism == "gamma") {
    absl::StatusOr<double> ell = LipschitzConstant(space, query->table());
    if (!ell.ok()) return ell.status();
    row.alpha = sc.alpha;
    if (!(sc.alpha > 0.0)) return absl::InvalidArgumentError("alpha must be > 0");
    noise.kind = cell.mechanism == "gaussian" ? NoiseKind::kGaussian
                                              : NoiseKind::kGammaBall;
    noise.omega = 1.0 / sc.alpha;
    noise.delta = sc.delta;
    noise.lipschitz = *ell;
    const double omega = noise.omega / users_scale;
    row.bound = noise.kind == NoiseKind::kGaussian
                    ? GaussianNoiseStd(*ell, omega, sc.delta) * std::sqrt(dim)
                    : *ell * dim * omega;
    release = [&](uint64_t seed) {
      return PrivEmdLinear(space, *query, data, noise, opts, seed);
    };
  } else if (cell.mechanism == "user_gaussian") {
    row.epsilon = sc.epsilon;
    if (!(sc.epsilon > 0.0)) {
      return absl::InvalidArgumentError("epsilon must be > 0");
    }
    row.bound = GaussianNoiseStd(UserLevelSensitivity(query->table()),
                                 1.0 / (sc.epsilon * users_scale), sc.delta) *
                std::sqrt(dim);
    release = [&](uint64_t seed) {
      return UserLevelGaussianBaseline(*query, data,
                                       UserBudget{sc.epsilon, sc.delta}, opts,
                                       seed);
    };
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown linear mechanism `%s`", cell.mechanism));
  }
  std::vector<double> errors;
  errors.reserve(sc.trials);
  for (int64_t t = 0; t < sc.trials; ++t) {
    absl::StatusOr<std::vector<double>> out = release(TrialSeed(cell.seed, t));
    if (!out.ok()) return out.status();
    double sq = 0.0;
    for (size_t i = 0; i < out->size(); ++i) {
      const double diff = (*out)[i] - (*truth)[i];
      sq += diff * diff;
    }
    errors.push_back(std::sqrt(sq));
  }
  const TrialStats stats = Summarize(errors);
  row.mean_error = stats.mean;
  row.std_error = stats.sd;
  return absl::OkStatus();
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  return absl::StrFormat("%.10g", v);
}

}  // namespace

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const std::string& text) {
  ExperimentConfig config;
  Section section = Section::kNone;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = raw;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[scenario]") {
        config.scenarios.emplace_back();
        section = Section::kScenario;
      } else if (line == "[grid]") {
        section = Section::kGrid;
      } else if (line == "[budget]") {
        section = Section::kBudget;
      } else {
        return ParseError(line_no, absl::StrCat("unknown section ", line));
      }
      if (config.scenarios.empty()) {
        return ParseError(line_no, "section before the first [scenario]");
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return ParseError(line_no, "expected `key = value`");
    }
    if (section == Section::kNone) {
      return ParseError(line_no, "key outside of any section");
    }
    const absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    Scenario& sc = config.scenarios.back();
    absl::Status s;
    switch (section) {
      case Section::kScenario:
        s = SetScenarioKey(sc, key, value);
        break;
      case Section::kGrid:
        s = SetGridKey(sc, key, value);
        break;
      case Section::kBudget:
        s = SetBudgetKey(sc, key, value);
        break;
      case Section::kNone:
        break;
    }
    if (!s.ok()) return ParseError(line_no, s.message());
  }
  for (size_t i = 0; i < config.scenarios.size(); ++i) {
    Scenario& sc = config.scenarios[i];
    if (sc.name.empty()) sc.name = absl::StrCat("scenario", i);
    if (sc.mechanisms.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("scenario `%s` lists no mechanisms", sc.name));
    }
  }
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open `%s`", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

absl::StatusOr<std::vector<ExperimentRow>> RunExperiment(
    const ExperimentConfig& config, const ExperimentOptions& options) {
  std::vector<Cell> cells;
  for (size_t si = 0; si < config.scenarios.size(); ++si) {
    const Scenario& sc = config.scenarios[si];
    if (sc.trials == 0) continue;
    for (const std::string& mech : sc.mechanisms) {
      for (int64_t n : sc.n_values) {
        for (int64_t m : sc.m_values) {
          Cell cell;
          cell.scenario = si;
          cell.mechanism = mech;
          cell.n = n;
          cell.m = m;
          cell.seed =
              RandomStream::Derive(options.seed, {cells.size()}).NextU64();
          cells.push_back(std::move(cell));
        }
      }
    }
  }
  std::vector<ExperimentRow> rows(cells.size());
  std::vector<absl::Status> statuses(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < cells.size(); i = next++) {
      const Cell& cell = cells[i];
      const Scenario& sc = config.scenarios[cell.scenario];
      ExperimentRow& row = rows[i];
      row.scenario = sc.name;
      row.mechanism = cell.mechanism;
      row.n = cell.n;
      row.m = cell.m;
      row.alpha = kNaN;
      row.epsilon = kNaN;
      row.delta = sc.delta;
      row.trial_count = sc.trials;
      row.mean_error = kNaN;
      row.std_error = kNaN;
      row.bound = kNaN;
      row.seed = cell.seed;
      row.calibration = CalibrationName(sc.calibration);
      row.status = "ok";
      statuses[i] = sc.kind == ScenarioKind::kFrequency
                        ? RunFrequencyCell(sc, cell, options.seed, row)
                        : RunLinearCell(sc, cell, options.seed, row);
      if (!statuses[i].ok()) {
        row.status = absl::StrCat("failed: ", statuses[i].message());
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (!statuses[i].ok()) {
      return absl::Status(
          statuses[i].code(),
          absl::StrFormat("cell %s/%s n=%d m=%d: %s", rows[i].scenario,
                          rows[i].mechanism, rows[i].n, rows[i].m,
                          statuses[i].message()));
    }
  }
  return rows;
}

std::string FormatExperimentCsv(std::span<const ExperimentRow> rows) {
  std::string out = absl::StrCat(kExperimentCsvHeader, "\n");
  for (const ExperimentRow& r : rows) {
    const std::string status = absl::StrReplaceAll(r.status, {{",", ";"}});
    absl::StrAppend(
        &out,
        absl::StrJoin(
            {r.scenario, r.mechanism, absl::StrCat(r.n), absl::StrCat(r.m),
             absl::StrCat(r.k), FormatNumber(r.alpha), FormatNumber(r.epsilon),
             FormatNumber(r.delta), absl::StrCat(r.trial_count),
             FormatNumber(r.mean_error), FormatNumber(r.std_error),
             FormatNumber(r.bound), absl::StrCat(r.seed), r.calibration,
             status},
            ","),
        "\n");
  }
  return out;
}

double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  const size_t n = std::min(x.size(), y.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace emdp
