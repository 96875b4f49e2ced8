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
#include <cmath>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace emdp {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

constexpr char kSmallConfig[] = R"(
# two scenarios
[scenario]
name = freq
kind = frequency
mechanisms = gkrr, hadamard, laplace
model = local
space = clustered:2,2,0.25
trials = 5
[grid]
n = 10, 20
m = 5
[budget]
alpha0 = 2
epsilon = 1.5
delta = 1e-6

[scenario]
name = lin
kind = linear
mechanisms = gaussian, gamma, user_gaussian
model = central
dim = 2
trials = 5
[grid]
n = 30
m = 4
[budget]
alpha = 2
epsilon = 2
delta = 1e-5
)";

TEST(ParseExperimentConfigTest, ParsesSections) {
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(kSmallConfig);
  ASSERT_TRUE(config.ok()) << config.status();
  ASSERT_EQ(config->scenarios.size(), 2u);
  const Scenario& freq = config->scenarios[0];
  EXPECT_EQ(freq.name, "freq");
  EXPECT_EQ(freq.kind, ScenarioKind::kFrequency);
  EXPECT_EQ(freq.mechanisms,
            (std::vector<std::string>{"gkrr", "hadamard", "laplace"}));
  EXPECT_EQ(freq.n_values, (std::vector<int64_t>{10, 20}));
  EXPECT_EQ(freq.m_values, (std::vector<int64_t>{5}));
  EXPECT_DOUBLE_EQ(freq.alpha0, 2.0);
  EXPECT_DOUBLE_EQ(freq.delta, 1e-6);
  const Scenario& lin = config->scenarios[1];
  EXPECT_EQ(lin.kind, ScenarioKind::kLinear);
  EXPECT_EQ(lin.model, TrustModel::kCentral);
  EXPECT_EQ(lin.dim, 2);
}

TEST(ParseExperimentConfigTest, AcceptsExponentLiterals) {
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(
      "[scenario]\nmechanisms = gkrr\n[grid]\nn = 1e2, 1e3\n");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->scenarios[0].n_values, (std::vector<int64_t>{100, 1000}));
}

TEST(ParseExperimentConfigTest, RejectsMalformed) {
  EXPECT_FALSE(ParseExperimentConfig("name = x\n").ok());
  EXPECT_FALSE(ParseExperimentConfig("[grid]\nn = 1\n").ok());
  EXPECT_FALSE(ParseExperimentConfig("[scenario]\nbogus = 1\n").ok());
  EXPECT_FALSE(
      ParseExperimentConfig("[scenario]\nmechanisms = a\n[grid]\nn = 1.5\n")
          .ok());
  EXPECT_FALSE(ParseExperimentConfig("[scenario]\nkind = frequency\n").ok());
  EXPECT_FALSE(
      ParseExperimentConfig("[scenario]\nmechanisms=a\n[budget]\ndelta = 2\n")
          .ok());
  absl::StatusOr<ExperimentConfig> bad =
      ParseExperimentConfig("[scenario]\nmechanisms = a\nmodel = remote\n");
  ASSERT_FALSE(bad.ok());
  EXPECT_THAT(bad.status().message(), HasSubstr("line 3"));
  EXPECT_FALSE(LoadExperimentConfig("/nonexistent/config.ini").ok());
}

TEST(RunExperimentTest, ZeroTrialsGivesHeaderOnly) {
  ExperimentConfig config =
      *ParseExperimentConfig("[scenario]\nmechanisms = gkrr\ntrials = 0\n");
  absl::StatusOr<std::vector<ExperimentRow>> rows = RunExperiment(config, {});
  ASSERT_TRUE(rows.ok());
  EXPECT_TRUE(rows->empty());
  EXPECT_EQ(FormatExperimentCsv(*rows),
            std::string(kExperimentCsvHeader) + "\n");
}

TEST(RunExperimentTest, ReproducibleAcrossJobCounts) {
  const ExperimentConfig config = *ParseExperimentConfig(kSmallConfig);
  ExperimentOptions one{17, 1};
  ExperimentOptions three{17, 3};
  absl::StatusOr<std::vector<ExperimentRow>> a = RunExperiment(config, one);
  absl::StatusOr<std::vector<ExperimentRow>> b = RunExperiment(config, three);
  ASSERT_TRUE(a.ok()) << a.status();
  ASSERT_TRUE(b.ok()) << b.status();
  EXPECT_EQ(FormatExperimentCsv(*a), FormatExperimentCsv(*b));
  EXPECT_EQ(a->size(), 3u * 2 + 3u);
  ExperimentOptions other{18, 1};
  EXPECT_NE(FormatExperimentCsv(*a),
            FormatExperimentCsv(*RunExperiment(config, other)));
}

TEST(RunExperimentTest, RowsCarryBoundSeedAndCalibration) {
  const ExperimentConfig config = *ParseExperimentConfig(kSmallConfig);
  const std::vector<ExperimentRow> rows = *RunExperiment(config, {5, 1});
  for (const ExperimentRow& row : rows) {
    EXPECT_EQ(row.status, "ok") << row.mechanism;
    EXPECT_EQ(row.calibration, "fixed");
    EXPECT_NE(row.seed, 0u);
    EXPECT_EQ(row.trial_count, 5);
    EXPECT_TRUE(std::isfinite(row.mean_error));
    EXPECT_GE(row.mean_error, 0.0);
    if (row.mechanism != "hadamard") {
      EXPECT_TRUE(std::isfinite(row.bound)) << row.mechanism;
    }
  }
  const std::string csv = FormatExperimentCsv(rows);
  EXPECT_THAT(csv, StartsWith(std::string(kExperimentCsvHeader) + "\n"));
  EXPECT_THAT(csv, HasSubstr("freq,gkrr,10,5,4,"));
  EXPECT_THAT(csv, HasSubstr("lin,user_gaussian,30,4,4,nan,2,"));
}

TEST(RunExperimentTest, InfeasibleCalibrationIsSkipped) {
  const ExperimentConfig config = *ParseExperimentConfig(
      "[scenario]\nname = s\nmechanisms = gkrr\ncalibration = exact\n"
      "trials = 2\n[grid]\nn = 3\nm = 4\n[budget]\nalpha = 1\n");
  absl::StatusOr<std::vector<ExperimentRow>> rows = RunExperiment(config, {});
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), 1u);
  EXPECT_THAT((*rows)[0].status, StartsWith("skipped: "));
  EXPECT_EQ((*rows)[0].calibration, "exact");
  EXPECT_TRUE(std::isnan((*rows)[0].mean_error));
  const std::string csv = FormatExperimentCsv(*rows);
  const std::string line = csv.substr(csv.find('\n') + 1);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 14);
}

TEST(RunExperimentTest, HardFailuresAreErrors) {
  const ExperimentConfig unknown = *ParseExperimentConfig(
      "[scenario]\nmechanisms = nope\ntrials = 1\n");
  EXPECT_FALSE(RunExperiment(unknown, {}).ok());
  const ExperimentConfig bad_space = *ParseExperimentConfig(
      "[scenario]\nmechanisms = gkrr\nspace = discrete:3\ntrials = 1\n"
      "[budget]\nalpha0 = 1\n");
  EXPECT_FALSE(RunExperiment(bad_space, {}).ok());
}

TEST(LogLogSlopeTest, RecoversPowerLaw) {
  const std::vector<double> x = {100, 1000, 10000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  EXPECT_NEAR(LogLogSlope(x, y), -0.5, 1e-12);
}

}  // namespace
}  // namespace emdp
