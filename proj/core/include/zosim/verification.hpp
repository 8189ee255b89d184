// Copyright 2026 The zosim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zosim {

/// One statistical or structural check: `observed` must stay within `bound`
/// for `passed` to hold. `detail` carries the human-readable context.
struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string detail;
};

// All checks below run on fixed, analytically tractable setups. The oracle
// checks use the coupled quadratic with m = 3 agents, 2-dimensional blocks,
// additive oracle noise, mu = 0.5, and instant (zero-delay) record delivery
// realized by ingesting every query into every memory within the trial. The
// smoothing checks use the n = 6 log-cosh sum, whose curvature is bounded
// by 1 everywhere.

/// MC mean of every update-direction component over fresh queries matches
/// the negated closed-form smoothed gradient within 4 standard errors.
CheckResult check_unbiased_oracle(bool paired_samples, std::int64_t trials,
                                  std::uint64_t seed);

/// Empirical per-component variance of the update direction stays strictly
/// below the analytic second-moment bound divided by the batch size.
CheckResult check_variance_bound(bool paired_samples, int batch_size,
                                 std::int64_t trials, std::uint64_t seed);

/// |MC smoothed value - exact value| <= mu^2 L n / 2 plus 3 standard errors.
CheckResult check_value_smoothing(double mu, std::int64_t samples,
                                  std::uint64_t seed);

/// ||MC smoothed gradient - central-difference gradient|| stays within
/// (mu/2) L (n+3)^{3/2} plus 3 standard errors (h = 1e-5).
CheckResult check_gradient_smoothing(double mu, std::int64_t samples,
                                     std::uint64_t seed);

/// Block-wise averaged gradient differences over stacked per-source copies
/// are (L/sqrt(m))-Lipschitz in the stacked point; verified on random pairs.
CheckResult check_surrogate_smoothness(std::int64_t trials,
                                       std::uint64_t seed);

/// The full suite at reporting scale (2e5-sample oracle and smoothing runs).
std::vector<CheckResult> run_verification_suite(std::uint64_t seed);

}  // namespace zosim
