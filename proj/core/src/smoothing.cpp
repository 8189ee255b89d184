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

#include "zosim/smoothing.hpp"

#include <cmath>
#include <string>

#include "zosim/errors.hpp"

namespace zosim {

McEstimate smoothed_value_mc(const std::function<double(const Vector&)>& cost,
                             const Vector& theta, double mu,
                             std::int64_t num_samples, RandomStream& stream) {
  if (mu <= 0.0) {
    throw ConfigError("smoothed_value_mc: mu must be positive");
  }
  if (num_samples < 2) {
    throw ConfigError("smoothed_value_mc: need at least 2 samples");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < num_samples; ++s) {
    const Vector u = gaussian_vector(stream, theta.size());
    const double value = cost(theta + mu * u);
    if (!std::isfinite(value)) {
      throw NumericError("smoothed_value_mc: non-finite cost at sample " +
                         std::to_string(s));
    }
    sum += value;
    sum_sq += value * value;
  }
  const double n = static_cast<double>(num_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), num_samples};
}

double compute_query(int agent_id, std::span<const double> unperturbed,
                     std::span<const double> perturbed, double mu,
                     int num_agents) {
  if (unperturbed.empty() || unperturbed.size() != perturbed.size()) {
    throw ProtocolError("compute_query: agent " + std::to_string(agent_id) +
                        ": batches must be non-empty and equally sized");
  }
  if (mu <= 0.0 || num_agents < 1) {
    throw ConfigError("compute_query: require mu > 0 and num_agents >= 1");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < unperturbed.size(); ++j) {
    acc += unperturbed[j] - perturbed[j];
  }
  const double denom =
      mu * static_cast<double>(num_agents) *
      static_cast<double>(unperturbed.size());
  const double result = acc / denom;
  if (!std::isfinite(result)) {
    throw NumericError("compute_query: agent " + std::to_string(agent_id) +
                       ": non-finite query value");
  }
  return result;
}

double variance_bound(const TheoryConstants& tc, int total_dim,
                      const SmoothingConfig& cfg) {
  if (total_dim < 1 || cfg.batch_size < 1) {
    throw ConfigError("variance_bound: require total_dim >= 1 and B >= 1");
  }
  const double n = static_cast<double>(total_dim);
  const double b = static_cast<double>(cfg.batch_size);
  const double mu2 = cfg.mu * cfg.mu;
  const double noise2 = tc.sigma * tc.sigma + tc.G * tc.G;
  const double cube = (n + 6.0) * (n + 6.0) * (n + 6.0);
  double sigma_tilde_sq;
  if (cfg.paired_samples) {
    sigma_tilde_sq = 8.0 * (n + 4.0) * noise2 + 2.0 * mu2 * tc.L * tc.L * cube;
  } else {
    if (cfg.mu <= 0.0) {
      throw NumericError("variance_bound: mu must be positive in unpaired mode");
    }
    sigma_tilde_sq = 4.0 * (n + 4.0) * noise2 + mu2 * tc.L * tc.L * cube +
                     4.0 * b * tc.L_xi * tc.L_xi * tc.v * tc.v / mu2;
  }
  return sigma_tilde_sq / b;
}

}  // namespace zosim
