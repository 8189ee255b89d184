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

#include "zosim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zosim/errors.hpp"

namespace zosim {

DescentConstants theory_constants(double L, int num_agents, int dmax,
                                  double gamma_max) {
  if (L <= 0.0 || num_agents < 1 || dmax < 0) {
    throw ConfigError("theory_constants: require L > 0, m >= 1, dmax >= 0");
  }
  DescentConstants out;
  out.M = L * (2.0 * num_agents * dmax + 1.0) / 2.0;
  out.stepsize_upper = 1.0 / out.M;
  out.eta = 1.0 - out.M * gamma_max;
  return out;
}

double stepsize(std::int64_t t, const StepsizeSchedule& schedule) {
  if (t < 0 || schedule.gamma0 <= 0.0) {
    throw ConfigError("stepsize: require t >= 0 and gamma0 > 0");
  }
  switch (schedule.kind) {
    case StepsizeKind::kPowerQuarter:
      return schedule.gamma0 / std::pow(static_cast<double>(t) + 1.0, 0.25);
    case StepsizeKind::kInvSqrt:
      if (schedule.r <= 0.0) {
        throw ConfigError("stepsize: inv_sqrt offset r must be positive");
      }
      return schedule.gamma0 / std::sqrt(static_cast<double>(t) + schedule.r);
    case StepsizeKind::kConstant:
      return schedule.gamma0;
  }
  throw ConfigError("stepsize: unknown schedule kind");
}

Vector finite_diff_gradient(const std::function<double(const Vector&)>& f,
                            const Vector& theta, double h) {
  if (h <= 0.0) {
    throw ConfigError("finite_diff_gradient: h must be positive");
  }
  Vector grad(theta.size());
  Vector probe = theta;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    probe(k) = theta(k) + h;
    const double up = f(probe);
    probe(k) = theta(k) - h;
    const double down = f(probe);
    probe(k) = theta(k);
    grad(k) = (up - down) / (2.0 * h);
  }
  return grad;
}

double VectorEstimate::norm_standard_error() const {
  return standard_error.norm();
}

VectorEstimate mc_smoothed_gradient(
    const std::function<double(const Vector&)>& f, const Vector& theta,
    double mu, std::int64_t num_samples, RandomStream& stream) {
  if (mu <= 0.0 || num_samples < 2) {
    throw ConfigError("mc_smoothed_gradient: require mu > 0, samples >= 2");
  }
  const Eigen::Index n = theta.size();
  const double base = f(theta);
  Vector sum = Vector::Zero(n);
  Vector sum_sq = Vector::Zero(n);
  for (std::int64_t s = 0; s < num_samples; ++s) {
    const Vector u = gaussian_vector(stream, n);
    const double slope = (f(theta + mu * u) - base) / mu;
    if (!std::isfinite(slope)) {
      throw NumericError("mc_smoothed_gradient: non-finite value at sample " +
                         std::to_string(s));
    }
    const Vector term = slope * u;
    sum += term;
    sum_sq += term.cwiseProduct(term);
  }
  const double n_s = static_cast<double>(num_samples);
  VectorEstimate est;
  est.value = sum / n_s;
  est.standard_error.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double var =
        std::max(0.0, (sum_sq(k) - n_s * est.value(k) * est.value(k)) /
                          (n_s - 1.0));
    est.standard_error(k) = std::sqrt(var / n_s);
  }
  est.num_samples = num_samples;
  return est;
}

double wall_time_ms(std::int64_t t, int batch_size, double coherence_ms) {
  if (t < 0 || batch_size < 1 || coherence_ms <= 0.0) {
    throw ConfigError("wall_time_ms: invalid arguments");
  }
  return static_cast<double>(t) * static_cast<double>(batch_size) *
         coherence_ms;
}

}  // namespace zosim
