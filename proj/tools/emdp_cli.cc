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

// Command-line front end for the emdp library.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "emdp/audit.h"
#include "emdp/budget.h"
#include "emdp/experiment.h"
#include "emdp/frequency.h"
#include "emdp/linear_mech.h"
#include "emdp/metric_space.h"
#include "emdp/random.h"
#include "emdp/reduction.h"
#include "emdp/shuffle_amp.h"
#include "emdp/transport.h"

namespace emdp {
namespace {

const std::map<std::string, TrustModel> kModels = {
    {"local", TrustModel::kLocal}, {"central", TrustModel::kCentral}};

std::string Num(double v) { return absl::StrFormat("%.10g", v); }

uint64_t TrialSeed(uint64_t seed, uint64_t trial) {
  return MixSeed(seed ^ MixSeed(trial + 1));
}

// One output coordinate per line, one column per point. Blank lines and
// lines starting with '#' are skipped.
absl::StatusOr<Matrix> ReadQueryTable(const std::string& path, size_t k) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open `", path, "`"));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<double> row;
    for (absl::string_view cell : absl::StrSplit(view, ',')) {
      double v = 0;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(cell), &v)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("bad number `%s` in `%s`", cell, path));
      }
      row.push_back(v);
    }
    if (row.size() != k) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "query rows need %d columns, found %d", k, row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("`", path, "` is empty"));
  }
  return Matrix::FromRows(rows);
}

int64_t MaxUserSize(const std::vector<Multiset>& users) {
  int64_t m = 0;
  for (const Multiset& u : users) m = std::max(m, u.size());
  return m;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  double alpha = 0;
  double delta = 0;
  int64_t m = 0;
  int64_t n = 1;
  TrustModel model = TrustModel::kLocal;
  std::string mode = "exact";
};

absl::Status RunCalibrate(const CalibrateArgs& a) {
  absl::StatusOr<MetricBudget> target = MetricBudget::Create(a.alpha, a.delta);
  if (!target.ok()) return target.status();
  absl::StatusOr<double> alpha0 = CalibrateAlpha0(
      *target, a.m, a.n, a.model,
      a.mode == "exact" ? CalibrationMode::kExact : CalibrationMode::kAsymptotic);
  if (!alpha0.ok()) return alpha0.status();
  AmplificationOptions options;
  options.enforce_applicability = false;
  absl::StatusOr<AmplificationResult> eff =
      EffectiveBudget(*alpha0, a.delta, a.m, a.n, a.model, options);
  if (!eff.ok()) return eff.status();
  if (eff->vacuous_delta) std::cerr << "warning: " << eff->warning << "\n";
  std::cout << "alpha0,alpha_eff,delta_eff,w_star\n"
            << absl::StrJoin({Num(*alpha0), Num(eff->alpha_eff),
                              Num(eff->delta_eff), Num(eff->w_star)},
                             ",")
            << "\n";
  return absl::OkStatus();
}

// ------------------------------------------------------------- linear-query

struct LinearArgs {
  std::string space;
  std::string data;
  std::string query;
  double alpha = 0;
  double delta = 0;
  std::string noise = "gamma";
  std::string norm = "l2";
  std::optional<double> lipschitz;
  TrustModel model = TrustModel::kLocal;
  bool unchecked = false;
  uint64_t seed = 1;
};

absl::Status RunLinear(const LinearArgs& a) {
  absl::StatusOr<MetricSpace> space = LoadMetricSpace(a.space);
  if (!space.ok()) return space.status();
  const size_t k = space->size();
  absl::StatusOr<Matrix> table = ReadQueryTable(a.query, k);
  if (!table.ok()) return table.status();
  absl::StatusOr<LinearQuery> query = LinearQuery::Create(*space, *table);
  if (!query.ok()) return query.status();

  Multiset data;
  LinearReleaseOptions options;
  options.model = a.model;
  options.unchecked = a.unchecked;
  if (a.model == TrustModel::kCentral) {
    absl::StatusOr<std::vector<Multiset>> users = ReadUsersCsv(a.data, k);
    if (!users.ok()) return users.status();
    absl::StatusOr<Multiset> pooled = Pool(*users);
    if (!pooled.ok()) return pooled.status();
    data = *std::move(pooled);
    options.num_users = static_cast<int64_t>(users->size());
  } else {
    absl::StatusOr<Multiset> items = ReadMultisetCsv(a.data, k);
    if (!items.ok()) return items.status();
    data = *std::move(items);
  }

  double lipschitz = 0;
  if (a.lipschitz.has_value()) {
    lipschitz = *a.lipschitz;
  } else {
    absl::StatusOr<double> exact = LipschitzConstant(*space, *table);
    if (!exact.ok()) return exact.status();
    lipschitz = *exact;
  }
  absl::StatusOr<MetricBudget> budget = MetricBudget::Create(a.alpha, a.delta);
  if (!budget.ok()) return budget.status();
  absl::StatusOr<NoiseSpec> noise = NoiseForBudget(
      a.noise == "gamma" ? NoiseKind::kGammaBall : NoiseKind::kGaussian,
      *budget, lipschitz);
  if (!noise.ok()) return noise.status();
  noise->norm = a.norm == "l1" ? BallNorm::kL1 : BallNorm::kL2;
  absl::StatusOr<std::vector<double>> out =
      PrivEmdLinear(*space, *query, data, *noise, options, a.seed);
  if (!out.ok()) return out.status();
  std::cout << "coordinate,value\n";
  for (size_t i = 0; i < out->size(); ++i) {
    std::cout << i << "," << Num((*out)[i]) << "\n";
  }
  return absl::OkStatus();
}

// ----------------------------------------------------------------- freq-est

struct FreqArgs {
  std::string space;
  std::string data;
  std::string mechanism = "gkrr";
  std::optional<double> alpha0;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  double delta = 1e-6;
  std::string calibration = "exact";
  TrustModel model = TrustModel::kLocal;
  int64_t trials = 1;
  uint64_t seed = 1;
  std::string out;
};

using Estimator = std::function<absl::StatusOr<std::vector<double>>(uint64_t)>;

absl::StatusOr<double> GkrrLevel(const FreqArgs& a, int64_t m, int64_t n) {
  if (a.alpha0.has_value()) return *a.alpha0;
  if (!a.alpha.has_value()) {
    return absl::InvalidArgumentError("gkrr needs --alpha0 or --alpha");
  }
  absl::StatusOr<MetricBudget> target = MetricBudget::Create(*a.alpha, a.delta);
  if (!target.ok()) return target.status();
  return CalibrateAlpha0(*target, m, n, a.model,
                         a.calibration == "exact" ? CalibrationMode::kExact
                                                  : CalibrationMode::kAsymptotic);
}

absl::Status RunFreq(const FreqArgs& a) {
  absl::StatusOr<MetricSpace> space = LoadMetricSpace(a.space);
  if (!space.ok()) return space.status();
  const size_t k = space->size();
  absl::StatusOr<std::vector<Multiset>> users = ReadUsersCsv(a.data, k);
  if (!users.ok()) return users.status();
  absl::StatusOr<Multiset> pooled = Pool(*users);
  if (!pooled.ok()) return pooled.status();
  absl::StatusOr<Histogram> truth = pooled->Normalize();
  if (!truth.ok()) return truth.status();
  const int64_t n = static_cast<int64_t>(users->size());
  const int64_t m = MaxUserSize(*users);

  // Mechanism state kept alive for the estimator closure.
  std::optional<TransitionMechanism> mech;
  Matrix inverse;
  std::vector<Multiset> reporters;
  Estimator estimate;
  if (a.mechanism == "gkrr") {
    const std::optional<ClusteredSpace>& shape = space->clustered();
    if (!shape.has_value()) {
      return absl::InvalidArgumentError("gkrr needs a clustered space");
    }
    absl::StatusOr<double> alpha0 = GkrrLevel(a, m, n);
    if (!alpha0.ok()) return alpha0.status();
    std::cerr << "alpha0 = " << Num(*alpha0) << "\n";
    absl::StatusOr<GkrrParams> params =
        GkrrParams::Create(shape->s, shape->t, shape->r, *alpha0);
    if (!params.ok()) return params.status();
    absl::StatusOr<TransitionMechanism> built = GkrrMechanism(*params);
    if (!built.ok()) return built.status();
    absl::StatusOr<Matrix> inv = GkrrRightInverse(*params);
    if (!inv.ok()) return inv.status();
    mech.emplace(*std::move(built));
    inverse = *std::move(inv);
    if (a.model == TrustModel::kCentral) {
      reporters.push_back(*pooled);
    } else {
      reporters = *users;
    }
    estimate = [&](uint64_t seed) {
      return FreqEstLocal(reporters, *mech, inverse, seed);
    };
  } else if (a.mechanism == "hadamard") {
    if (a.model != TrustModel::kLocal) {
      return absl::InvalidArgumentError("hadamard runs in the local model");
    }
    if (!a.epsilon.has_value()) {
      return absl::InvalidArgumentError("hadamard needs --epsilon");
    }
    absl::StatusOr<double> eps0 = HadamardItemBudget(*a.epsilon, m, a.delta);
    if (!eps0.ok()) return eps0.status();
    absl::StatusOr<HadamardResponse> hr =
        BuildHadamardResponse(static_cast<int>(k), *eps0);
    if (!hr.ok()) return hr.status();
    mech.emplace(hr->mechanism);
    inverse = hr->inverse;
    reporters = *users;
    estimate = [&](uint64_t seed) {
      return FreqEstLocal(reporters, *mech, inverse, seed);
    };
  } else if (a.mechanism == "laplace") {
    if (a.model != TrustModel::kCentral) {
      return absl::InvalidArgumentError("laplace runs in the central model");
    }
    if (!a.epsilon.has_value()) {
      return absl::InvalidArgumentError("laplace needs --epsilon");
    }
    estimate = [&](uint64_t seed) -> absl::StatusOr<std::vector<double>> {
      absl::StatusOr<LaplaceEstimate> est =
          LaplaceFreqCentral(*pooled, n, *a.epsilon, seed);
      if (!est.ok()) return est.status();
      return est->raw;
    };
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown mechanism `", a.mechanism, "`"));
  }

  std::string csv = "trial,emd_error,l1_error\n";
  for (int64_t t = 0; t < a.trials; ++t) {
    absl::StatusOr<std::vector<double>> raw =
        estimate(TrialSeed(a.seed, static_cast<uint64_t>(t)));
    if (!raw.ok()) return raw.status();
    absl::StatusOr<double> emd = EmdCost(*space, ClampToSimplex(*raw), *truth);
    if (!emd.ok()) return emd.status();
    double l1 = 0;
    for (size_t x = 0; x < k; ++x) l1 += std::abs((*raw)[x] - (*truth)[x]);
    absl::StrAppend(&csv, t, ",", Num(*emd), ",", Num(l1), "\n");
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream file(a.out);
    if (!(file << csv)) {
      return absl::UnavailableError(absl::StrCat("cannot write `", a.out, "`"));
    }
  }
  return absl::OkStatus();
}

// -------------------------------------------------------------------- audit

struct AuditArgs {
  std::string space;
  std::string mechanism = "gkrr";
  double alpha0 = 0;
  int64_t m = 1;
  std::optional<double> alpha;
  double delta = 0;
};

std::string FormatCounts(const Multiset& s) {
  return absl::StrJoin(s.counts(), " ");
}

absl::Status RunAudit(const AuditArgs& a) {
  absl::StatusOr<MetricSpace> space = LoadMetricSpace(a.space);
  if (!space.ok()) return space.status();
  std::optional<TransitionMechanism> mech;
  if (a.mechanism == "gkrr") {
    const std::optional<ClusteredSpace>& shape = space->clustered();
    if (!shape.has_value()) {
      return absl::InvalidArgumentError("gkrr needs a clustered space");
    }
    absl::StatusOr<GkrrParams> params =
        GkrrParams::Create(shape->s, shape->t, shape->r, a.alpha0);
    if (!params.ok()) return params.status();
    absl::StatusOr<TransitionMechanism> built = GkrrMechanism(*params);
    if (!built.ok()) return built.status();
    mech.emplace(*std::move(built));
  } else if (a.mechanism == "hadamard") {
    absl::StatusOr<HadamardResponse> hr =
        BuildHadamardResponse(static_cast<int>(space->size()), a.alpha0);
    if (!hr.ok()) return hr.status();
    mech.emplace(hr->mechanism);
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown mechanism `", a.mechanism, "`"));
  }

  // Without --alpha the amplified budget of the itemwise release is audited.
  double alpha = 0;
  double delta = a.delta;
  if (a.alpha.has_value()) {
    alpha = *a.alpha;
  } else {
    AmplificationOptions options;
    options.enforce_applicability = false;
    absl::StatusOr<AmplificationResult> eff = EffectiveBudget(
        mech->alpha0(), a.delta, a.m, 1, TrustModel::kLocal, options);
    if (!eff.ok()) return eff.status();
    alpha = eff->alpha_eff;
    delta = eff->delta_eff;
  }
  absl::StatusOr<EmdAudit> audit = VerifyEmdDp(*mech, a.m, alpha, delta);
  if (!audit.ok()) return audit.status();
  std::cout << "result," << (audit->pass ? "pass" : "fail") << "\n"
            << "alpha," << Num(alpha) << "\n"
            << "delta," << Num(delta) << "\n"
            << "pairs_checked," << audit->pairs_checked << "\n"
            << "worst_first," << FormatCounts(audit->first) << "\n"
            << "worst_second," << FormatCounts(audit->second) << "\n"
            << "worst_emd," << Num(audit->emd) << "\n"
            << "worst_divergence," << Num(audit->divergence) << "\n"
            << "slack," << Num(audit->slack) << "\n";
  return absl::OkStatus();
}

// ------------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string space;
  std::string data;
  std::string query;
  int64_t samples = 0;
  double epsilon = 0;
  double delta = 0;
  double radius = 0;
  std::string inner = "freq-est";
  std::string calibration = "composition";
  uint64_t seed = 1;
};

absl::Status RunReduce(const ReduceArgs& a) {
  absl::StatusOr<MetricSpace> space = LoadMetricSpace(a.space);
  if (!space.ok()) return space.status();
  const size_t k = space->size();
  absl::StatusOr<std::vector<Multiset>> users = ReadUsersCsv(a.data, k);
  if (!users.ok()) return users.status();
  const int64_t n = static_cast<int64_t>(users->size());
  absl::StatusOr<MetricBudget> budget =
      ReductionBudget(a.epsilon, a.delta, a.radius, a.samples);
  if (!budget.ok()) return budget.status();
  std::cerr << "inner budget: alpha = " << Num(budget->alpha)
            << ", delta = " << Num(budget->delta) << "\n";
  const uint64_t projection_seed = MixSeed(a.seed);
  const uint64_t release_seed = MixSeed(projection_seed);

  absl::StatusOr<std::vector<double>> out;
  if (a.inner == "freq-est") {
    const std::optional<ClusteredSpace>& shape = space->clustered();
    if (!shape.has_value()) {
      return absl::InvalidArgumentError("freq-est needs a clustered space");
    }
    double alpha0 = budget->alpha / static_cast<double>(a.samples);
    if (a.calibration != "composition") {
      absl::StatusOr<double> calibrated = CalibrateAlpha0(
          *budget, a.samples, n, TrustModel::kLocal,
          a.calibration == "exact" ? CalibrationMode::kExact
                                   : CalibrationMode::kAsymptotic);
      if (!calibrated.ok()) return calibrated.status();
      alpha0 = *calibrated;
    }
    std::cerr << "alpha0 = " << Num(alpha0) << "\n";
    absl::StatusOr<GkrrParams> params =
        GkrrParams::Create(shape->s, shape->t, shape->r, alpha0);
    if (!params.ok()) return params.status();
    absl::StatusOr<TransitionMechanism> mech = GkrrMechanism(*params);
    if (!mech.ok()) return mech.status();
    absl::StatusOr<Matrix> inverse = GkrrRightInverse(*params);
    if (!inverse.ok()) return inverse.status();
    out = BoundedEmdReduction(
        *users, a.samples,
        [&](const std::vector<Multiset>& projected) {
          return FreqEstLocal(projected, *mech, *inverse, release_seed);
        },
        projection_seed);
  } else if (a.inner == "linear-query") {
    absl::StatusOr<Matrix> table = ReadQueryTable(a.query, k);
    if (!table.ok()) return table.status();
    absl::StatusOr<LinearQuery> query = LinearQuery::Create(*space, *table);
    if (!query.ok()) return query.status();
    absl::StatusOr<double> lipschitz = LipschitzConstant(*space, *table);
    if (!lipschitz.ok()) return lipschitz.status();
    absl::StatusOr<NoiseSpec> noise =
        NoiseForBudget(NoiseKind::kGammaBall, *budget, *lipschitz);
    if (!noise.ok()) return noise.status();
    LinearReleaseOptions options;
    options.model = TrustModel::kCentral;
    options.num_users = n;
    out = BoundedEmdReduction(
        *users, a.samples,
        [&](const std::vector<Multiset>& projected)
            -> absl::StatusOr<std::vector<double>> {
          absl::StatusOr<Multiset> pooled = Pool(projected);
          if (!pooled.ok()) return pooled.status();
          return PrivEmdLinear(*space, *query, *pooled, *noise, options,
                               release_seed);
        },
        projection_seed);
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown inner mechanism `", a.inner, "`"));
  }
  if (!out.ok()) return out.status();
  std::cout << "coordinate,value\n";
  for (size_t i = 0; i < out->size(); ++i) {
    std::cout << i << "," << Num((*out)[i]) << "\n";
  }
  return absl::OkStatus();
}

// --------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string config;
  std::string out;
  uint64_t seed = 1;
  int jobs = 1;
  bool allow_skip = false;
};

// Returns the number of skipped rows through `skipped`.
absl::Status RunExperimentCommand(const ExperimentArgs& a, int* skipped) {
  absl::StatusOr<ExperimentConfig> config = LoadExperimentConfig(a.config);
  if (!config.ok()) return config.status();
  ExperimentOptions options;
  options.seed = a.seed;
  options.jobs = a.jobs;
  absl::StatusOr<std::vector<ExperimentRow>> rows =
      RunExperiment(*config, options);
  if (!rows.ok()) return rows.status();
  const std::string csv = FormatExperimentCsv(*rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream file(a.out);
    if (!(file << csv)) {
      return absl::UnavailableError(absl::StrCat("cannot write `", a.out, "`"));
    }
  }
  *skipped = 0;
  for (const ExperimentRow& r : *rows) {
    if (r.status != "ok") {
      ++*skipped;
      std::cerr << r.scenario << "/" << r.mechanism << " n=" << r.n
                << " m=" << r.m << ": " << r.status << "\n";
    }
  }
  return absl::OkStatus();
}

int Report(const absl::Status& status) {
  if (status.ok()) return 0;
  std::cerr << "error: " << status.message() << "\n";
  return 1;
}

int Main(int argc, char** argv) {
  CLI::App app{"Metric differential privacy under the earth mover's distance"};
  app.require_subcommand(1);
  auto model_option = [](CLI::App* cmd, TrustModel* model) {
    cmd->add_option("--model", *model, "local or central")
        ->transform(CLI::CheckedTransformer(kModels, CLI::ignore_case));
  };

  CalibrateArgs cal;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Find alpha0 for a target budget");
  calibrate->add_option("--alpha", cal.alpha, "Target alpha")->required();
  calibrate->add_option("--delta", cal.delta, "Target delta")->required();
  calibrate->add_option("--m", cal.m, "Items per user")->required();
  calibrate->add_option("--n", cal.n, "Number of users (central model)");
  model_option(calibrate, &cal.model);
  calibrate->add_option("--mode", cal.mode)
      ->check(CLI::IsMember({"exact", "asymptotic"}));

  LinearArgs lin;
  CLI::App* linear =
      app.add_subcommand("linear-query", "Release a noisy linear query");
  linear->add_option("--space", lin.space, "Metric space")->required();
  linear->add_option("--data", lin.data, "Items CSV (users CSV if central)")
      ->required();
  linear->add_option("--query", lin.query, "Query table CSV")->required();
  linear->add_option("--alpha", lin.alpha, "Metric budget")->required();
  linear->add_option("--delta", lin.delta, "Failure probability (gaussian)");
  linear->add_option("--noise", lin.noise)
      ->check(CLI::IsMember({"gamma", "gaussian"}));
  linear->add_option("--norm", lin.norm)->check(CLI::IsMember({"l2", "l1"}));
  linear->add_option("--lipschitz", lin.lipschitz,
                     "Declared Lipschitz constant (default: exact)");
  linear->add_flag("--unchecked", lin.unchecked,
                   "Trust --lipschitz without checking it");
  model_option(linear, &lin.model);
  linear->add_option("--seed", lin.seed);

  FreqArgs fr;
  CLI::App* freq = app.add_subcommand("freq-est", "Estimate a histogram");
  freq->add_option("--space", fr.space, "Metric space")->required();
  freq->add_option("--data", fr.data, "Users CSV")->required();
  freq->add_option("--mechanism", fr.mechanism)
      ->check(CLI::IsMember({"gkrr", "hadamard", "laplace"}));
  freq->add_option("--alpha0", fr.alpha0, "Per-item level (gkrr)");
  freq->add_option("--alpha", fr.alpha, "Target alpha, calibrated (gkrr)");
  freq->add_option("--epsilon", fr.epsilon, "User budget (hadamard, laplace)");
  freq->add_option("--delta", fr.delta);
  freq->add_option("--calibration", fr.calibration)
      ->check(CLI::IsMember({"exact", "asymptotic"}));
  model_option(freq, &fr.model);
  freq->add_option("--trials", fr.trials)->check(CLI::NonNegativeNumber);
  freq->add_option("--seed", fr.seed);
  freq->add_option("--out", fr.out, "Output CSV (default stdout)");

  AuditArgs au;
  CLI::App* audit =
      app.add_subcommand("audit", "Exhaustively audit an itemwise release");
  audit->add_option("--space", au.space, "Metric space")->required();
  audit->add_option("--mechanism", au.mechanism)
      ->check(CLI::IsMember({"gkrr", "hadamard"}));
  audit->add_option("--alpha0", au.alpha0, "Channel level")->required();
  audit->add_option("--m", au.m, "Dataset size")->check(CLI::PositiveNumber);
  audit->add_option("--alpha", au.alpha,
                    "Claimed alpha (default: amplified budget)");
  audit->add_option("--delta", au.delta);

  ReduceArgs re;
  CLI::App* reduce =
      app.add_subcommand("reduce", "Run a mechanism on projected users");
  reduce->add_option("--space", re.space, "Metric space")->required();
  reduce->add_option("--data", re.data, "Users CSV")->required();
  reduce->add_option("--query", re.query, "Query table (linear-query)");
  reduce->add_option("--samples", re.samples, "Projection size s")
      ->required();
  reduce->add_option("--epsilon", re.epsilon)->required();
  reduce->add_option("--delta", re.delta)->required();
  reduce->add_option("--radius", re.radius)->required();
  reduce->add_option("--inner", re.inner)
      ->check(CLI::IsMember({"freq-est", "linear-query"}));
  reduce->add_option("--calibration", re.calibration)
      ->check(CLI::IsMember({"composition", "exact", "asymptotic"}));
  reduce->add_option("--seed", re.seed);

  ExperimentArgs ex;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run an experiment config");
  experiment->add_option("--config", ex.config)->required();
  experiment->add_option("--out", ex.out, "Output CSV (default stdout)");
  experiment->add_option("--seed", ex.seed);
  experiment->add_option("--jobs", ex.jobs)->check(CLI::PositiveNumber);
  experiment->add_flag("--allow-skip", ex.allow_skip,
                       "Exit 0 even if some cells were skipped");

  CLI11_PARSE(app, argc, argv);

  if (calibrate->parsed()) return Report(RunCalibrate(cal));
  if (linear->parsed()) return Report(RunLinear(lin));
  if (freq->parsed()) return Report(RunFreq(fr));
  if (audit->parsed()) return Report(RunAudit(au));
  if (reduce->parsed()) return Report(RunReduce(re));
  int skipped = 0;
  if (int rc = Report(RunExperimentCommand(ex, &skipped)); rc != 0) return rc;
  if (skipped > 0 && !ex.allow_skip) {
    std::cerr << "error: " << skipped
              << " cell(s) skipped; pass --allow-skip to accept\n";
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace emdp

int main(int argc, char** argv) { return emdp::Main(argc, argv); }
