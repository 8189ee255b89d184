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
#include <span>

#include "zosim/random.hpp"

namespace zosim {

/// Gaussian-smoothing and minibatch settings shared by all agents.
struct SmoothingConfig {
  double mu = 0.1;      // smoothing radius, > 0
  int batch_size = 1;   // oracle calls per query and evaluation point, >= 1
  bool paired_samples = false;  // reuse the same noise sample at both points
};

/// Problem-level constants entering the second-moment bound:
/// L0 (Lipschitz constant of the costs), L (gradient Lipschitz constant),
/// sigma (gradient noise), G (gradient norm bound), v (noise second moment),
/// L_xi (cost sensitivity to the noise sample).
struct TheoryConstants {
  double L0 = 0.0;
  double L = 0.0;
  double sigma = 0.0;
  double G = 0.0;
  double v = 0.0;
  double L_xi = 0.0;
};

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::int64_t num_samples = 0;
};

/// Monte-Carlo estimate of the smoothed value E_u[f(theta + mu * u)] with
/// u standard normal. Requires num_samples >= 2; a non-finite cost raises
/// NumericError naming the offending sample index.
McEstimate smoothed_value_mc(const std::function<double(const Vector&)>& cost,
                             const Vector& theta, double mu,
                             std::int64_t num_samples, RandomStream& stream);

/// Scalar query from one minibatch: the mean cost drop between the
/// unperturbed and perturbed evaluation points, normalized by mu * m.
/// Summation is strictly left to right over the batch so results are
/// bit-reproducible. Both spans must be non-empty and of equal length.
double compute_query(int agent_id, std::span<const double> unperturbed,
                     std::span<const double> perturbed, double mu,
                     int num_agents);

/// Upper bound on the per-query second moment of the update direction
/// around its mean, divided by the batch size. The paired variant drops the
/// noise-coupling term; the unpaired variant requires mu > 0.
double variance_bound(const TheoryConstants& tc, int total_dim,
                      const SmoothingConfig& cfg);

}  // namespace zosim
