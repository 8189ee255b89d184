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
#include <functional>
#include <string>
#include <vector>

#include "zosim/random.hpp"
#include "zosim/smoothing.hpp"

namespace zosim {

/// Descent constants derived from the problem scale: the effective
/// smoothness M = L * (2 m dmax + 1) / 2, the stepsize ceiling 1/M, and the
/// descent margin eta = 1 - M * gamma_max (positive iff the schedule is
/// admissible).
struct DescentConstants {
  double M = 0.0;
  double stepsize_upper = 0.0;
  double eta = 0.0;
};

DescentConstants theory_constants(double L, int num_agents, int dmax,
                                  double gamma_max);

enum class StepsizeKind {
  kPowerQuarter,  // gamma0 / (t + 1)^{1/4}
  kInvSqrt,       // gamma0 / sqrt(t + r)
  kConstant,      // gamma0
};

struct StepsizeSchedule {
  StepsizeKind kind = StepsizeKind::kPowerQuarter;
  double gamma0 = 0.5;
  double r = 1.0;  // inv_sqrt offset, > 0
};

double stepsize(std::int64_t t, const StepsizeSchedule& schedule);

/// Central difference, one coordinate pair of evaluations per dimension.
Vector finite_diff_gradient(const std::function<double(const Vector&)>& f,
                            const Vector& theta, double h);

struct VectorEstimate {
  Vector value;
  Vector standard_error;  // per component
  std::int64_t num_samples = 0;
  /// sqrt of the summed squared per-component standard errors.
  double norm_standard_error() const;
};

/// Monte-Carlo estimate of the smoothed gradient via the one-sided
/// difference estimator ((f(theta + mu u) - f(theta)) / mu) * u.
VectorEstimate mc_smoothed_gradient(
    const std::function<double(const Vector&)>& f, const Vector& theta,
    double mu, std::int64_t num_samples, RandomStream& stream);

/// Elapsed milliseconds after t ticks when each batch sample pair occupies
/// one channel coherence interval.
double wall_time_ms(std::int64_t t, int batch_size,
                    double coherence_ms = 25.0);

}  // namespace zosim
