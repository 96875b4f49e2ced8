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

// Monte-Carlo experiment harness.
//
// A config file holds one or more scenarios:
//
//   [scenario]
//   name = freq_local
//   kind = frequency            # frequency | linear
//   mechanisms = gkrr, hadamard # see below
//   model = local               # local | central
//   calibration = fixed         # fixed | exact | asymptotic
//   space = clustered:2,2,0.25  # frequency only
//   dim = 3                     # linear only
//   trials = 40
//   [grid]
//   n = 100, 1000, 10000
//   m = 50
//   [budget]
//   alpha0 = 4                  # used by calibration = fixed
//   alpha = 2
//   epsilon = 2
//   delta = 1e-6
//
// Frequency mechanisms: gkrr (local or central), hadamard (local, user-level
// epsilon), laplace (central, user-level epsilon). The error is the EMD
// between the clamp-and-renormalize projection of the estimate and the true
// normalized histogram.
//
// Linear mechanisms: gaussian and gamma (metric DP at alpha), and
// user_gaussian (the user-level baseline at epsilon). The space is the 2 dim
// signed unit vectors +-e_i with distances divided by 2, the query is the
// identity embedding, and the error is the Euclidean norm of the noise.
//
// Each (scenario, mechanism, n, m) cell runs `trials` trials. Randomness is
// derived from (master seed, cell index), so output does not depend on the
// number of worker threads.

#ifndef EMDP_EXPERIMENT_H_
#define EMDP_EXPERIMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "emdp/budget.h"
#include "emdp/shuffle_amp.h"

namespace emdp {

enum class ScenarioKind { kFrequency, kLinear };
enum class Calibration { kFixed, kExact, kAsymptotic };

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::kFrequency;
  std::vector<std::string> mechanisms;
  TrustModel model = TrustModel::kLocal;
  Calibration calibration = Calibration::kFixed;
  std::string space = "clustered:2,2,0.25";
  int dim = 3;
  int64_t trials = 0;
  std::vector<int64_t> n_values = {1};
  std::vector<int64_t> m_values = {1};
  double alpha0 = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double delta = 1e-6;
};

struct ExperimentConfig {
  std::vector<Scenario> scenarios;
};

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(const std::string& text);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);

struct ExperimentRow {
  std::string scenario;
  std::string mechanism;
  int64_t n = 0;
  int64_t m = 0;
  int64_t k = 0;
  // Metric budget (NaN when the mechanism has none).
  double alpha = 0.0;
  // User-level budget (NaN when the mechanism has none).
  double epsilon = 0.0;
  double delta = 0.0;
  int64_t trial_count = 0;
  double mean_error = 0.0;
  // Standard deviation of the per-trial errors.
  double std_error = 0.0;
  double bound = 0.0;
  uint64_t seed = 0;
  std::string calibration;
  // "ok", or "skipped: <reason>".
  std::string status;
};

struct ExperimentOptions {
  uint64_t seed = 1;
  int jobs = 1;
};

absl::StatusOr<std::vector<ExperimentRow>> RunExperiment(
    const ExperimentConfig& config, const ExperimentOptions& options);

inline constexpr char kExperimentCsvHeader[] =
    "scenario,mechanism,n,m,k,alpha,epsilon,delta,trial_count,mean_error,"
    "std_error,bound,seed,calibration,status";

std::string FormatExperimentCsv(std::span<const ExperimentRow> rows);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(std::span<const double> x, std::span<const double> y);

}  // namespace emdp

#endif  // EMDP_EXPERIMENT_H_
