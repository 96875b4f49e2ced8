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

#include "emdp/shuffle_amp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "emdp/random.h"

namespace emdp {
namespace {

// Substream index reserved for the final shuffle.
constexpr uint64_t kShuffleStream = ~uint64_t{0};

// The bracketed constant C of h.
double AmplificationFactor(double total, double x0, double alpha0,
                           double delta) {
  const double ea = std::exp(alpha0);
  return 8.0 * std::sqrt(ea * std::log(4.0 * x0 / delta)) / std::sqrt(total) +
         8.0 * ea / total;
}

double HUnchecked(double total, double x0, double x1, double alpha0,
                  double delta) {
  if (x1 == 0.0 || alpha0 == 0.0) return 0.0;
  const double c = AmplificationFactor(total, x0, alpha0, delta);
  return x0 * std::log1p(std::tanh(alpha0 * x1 / (2.0 * x0)) * c);
}

absl::Status CheckApplicable(double total, double alpha0, double delta) {
  const double limit = ApplicabilityLimit(total, delta);
  if (!(alpha0 < limit)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "amplification inapplicable: alpha0 = %g must be below "
        "ln(N / (16 ln(4N / delta))) = %g for N = %g",
        alpha0, limit, total));
  }
  return absl::OkStatus();
}

double TotalReports(int64_t m, int64_t n, TrustModel model) {
  return model == TrustModel::kCentral
             ? static_cast<double>(m) * static_cast<double>(n)
             : static_cast<double>(m);
}

}  // namespace

absl::StatusOr<std::vector<size_t>> PrivEmdItemwise(
    const Multiset& data, const TransitionMechanism& mechanism,
    uint64_t seed) {
  if (data.empty()) return absl::InvalidArgumentError("dataset is empty");
  if (data.domain_size() != mechanism.input_size()) {
    return absl::InvalidArgumentError("dataset does not match the channel");
  }
  const std::vector<size_t> items = data.Items();
  std::vector<size_t> reports(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    RandomStream rng = RandomStream::Derive(seed, {i});
    reports[i] = mechanism.Sample(items[i], rng);
  }
  RandomStream shuffle = RandomStream::Derive(seed, {kShuffleStream});
  for (size_t i = reports.size(); i > 1; --i) {
    std::swap(reports[i - 1], reports[shuffle.UniformInt(i)]);
  }
  return reports;
}

double ApplicabilityLimit(double total, double delta) {
  const double inner = 16.0 * std::log(4.0 * total / delta);
  if (!(inner > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(total / inner);
}

absl::StatusOr<double> HBound(double total, double x0, double x1,
                              double alpha0, double delta,
                              const AmplificationOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(x0 > 0.0 && x0 <= total) || !(x1 >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "h needs 0 < x0 <= %g and x1 >= 0, got x0=%g x1=%g", total, x0, x1));
  }
  if (!(alpha0 >= 0.0)) {
    return absl::InvalidArgumentError("alpha0 must be nonnegative");
  }
  if (options.enforce_applicability) {
    if (absl::Status s = CheckApplicable(total, alpha0, delta); !s.ok()) {
      return s;
    }
  }
  return HUnchecked(total, x0, x1, alpha0, delta);
}

double HBoundSlopeAtZero(double total, double m, double alpha0, double delta) {
  return m * alpha0 * AmplificationFactor(total, m, alpha0, delta) / 2.0;
}

absl::StatusOr<AmplificationResult> EffectiveBudget(
    double alpha0, double delta, int64_t m, int64_t n, TrustModel model,
    const AmplificationOptions& options) {
  if (m < 1 || (model == TrustModel::kCentral && n < 1)) {
    return absl::InvalidArgumentError("need m >= 1 and, centrally, n >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) {
    return absl::InvalidArgumentError("alpha0 must be finite and >= 0");
  }
  const double total = TotalReports(m, n, model);
  const double md = static_cast<double>(m);
  if (options.enforce_applicability) {
    if (absl::Status s = CheckApplicable(total, alpha0, delta); !s.ok()) {
      return s;
    }
  }
  AmplificationResult result;
  if (alpha0 == 0.0) {
    result.delta_eff = delta;
    return result;
  }
  auto ratio = [&](double w) {
    return HUnchecked(total, md, md * w, alpha0, delta) / w;
  };
  // The w -> 0 end of the interval is covered by its analytic limit.
  double best = HBoundSlopeAtZero(total, md, alpha0, delta);
  double best_w = 0.0;
  const int grid = std::max(options.grid_points, 2);
  int best_cell = 0;
  for (int i = 1; i <= grid; ++i) {
    const double w = static_cast<double>(i) / grid;
    const double v = ratio(w);
    if (v > best) {
      best = v;
      best_w = w;
      best_cell = i;
    }
  }
  if (best_cell > 0) {
    // Golden-section refinement on the neighboring cells.
    double lo = static_cast<double>(std::max(best_cell - 1, 0)) / grid;
    double hi = static_cast<double>(std::min(best_cell + 1, grid)) / grid;
    lo = std::max(lo, 1e-12);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - phi * (hi - lo);
    double b = lo + phi * (hi - lo);
    double fa = ratio(a);
    double fb = ratio(b);
    for (int iter = 0; iter < 100 && hi - lo > 1e-14; ++iter) {
      if (fa < fb) {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = ratio(b);
      } else {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = ratio(a);
      }
    }
    const double w = (lo + hi) / 2.0;
    if (const double v = ratio(w); v > best) {
      best = v;
      best_w = w;
    }
  }
  result.alpha_eff = best;
  result.w_star = best_w;
  result.delta_eff = delta * std::exp(HUnchecked(total, md, md, alpha0, delta));
  if (result.delta_eff >= 1.0) {
    result.vacuous_delta = true;
    result.warning = absl::StrFormat(
        "delta_eff = %g >= 1; the guarantee is vacuous", result.delta_eff);
  }
  return result;
}

absl::StatusOr<double> CalibrateAlpha0(const MetricBudget& target, int64_t m,
                                       int64_t n, TrustModel model,
                                       CalibrationMode mode) {
  if (!(target.alpha >= 0.0) || !std::isfinite(target.alpha)) {
    return absl::InvalidArgumentError("target alpha must be finite and >= 0");
  }
  if (!(target.delta > 0.0 && target.delta < 1.0)) {
    return absl::InvalidArgumentError("target delta must lie in (0, 1)");
  }
  if (m < 1 || (model == TrustModel::kCentral && n < 1)) {
    return absl::InvalidArgumentError("need m >= 1 and, centrally, n >= 1");
  }
  if (target.alpha == 0.0) return 0.0;
  const double md = static_cast<double>(m);

  if (mode == CalibrationMode::kAsymptotic) {
    const double scale = model == TrustModel::kCentral
                             ? std::sqrt(static_cast<double>(n))
                             : 1.0;
    const double a = target.alpha * scale;
    const double root = std::sqrt(
        md * (std::log(4.0 * md / target.delta) + target.alpha));
    if (a <= 32.0 * root) return a / (32.0 * root);
    if (a < md * scale) return 2.0 * std::log(a / (16.0 * root));
    return absl::OutOfRangeError(absl::StrFormat(
        "target alpha %g is outside the range of the asymptotic formula "
        "(must be below m = %d)",
        target.alpha, m));
  }

  const double total = TotalReports(m, n, model);
  const double limit = ApplicabilityLimit(total, target.delta);
  if (!(limit > 0.0)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "no feasible alpha0: amplification needs alpha0 < %g for N = %g",
        limit, total));
  }
  auto alpha_eff = [&](double alpha0) -> absl::StatusOr<double> {
    absl::StatusOr<AmplificationResult> r =
        EffectiveBudget(alpha0, target.delta, m, n, model);
    if (!r.ok()) return r.status();
    return r->alpha_eff;
  };
  double lo = 0.0;
  double hi = limit - 1e-9;
  absl::StatusOr<double> at_hi = alpha_eff(hi);
  if (!at_hi.ok()) return at_hi.status();
  if (*at_hi <= target.alpha) return hi;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<double> v = alpha_eff(mid);
    if (!v.ok()) return v.status();
    if (*v <= target.alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double CompositionBaseline(double alpha0, int64_t m) {
  return static_cast<double>(m) * alpha0;
}

}  // namespace emdp
