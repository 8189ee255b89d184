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

#include <Eigen/Dense>

#include "zosim/problem.hpp"

namespace zosim {

enum class QuadCoupling {
  // Coefficient matrix I - (2/m) * ones: every cost touches every block,
  // all rows have unit norm, and the averaged objective has the perfectly
  // conditioned Hessian I/m.
  kHouseholder,
  // Each cost touches its own block with weight 1 and the two ring
  // neighbors with weight `ring_strength`; gives genuinely sparse
  // dependency sets.
  kRing,
};

struct QuadraticConfig {
  int num_agents = 3;
  int block_dim = 2;
  QuadCoupling coupling = QuadCoupling::kHouseholder;
  double ring_strength = 0.25;
  double noise_sd = 0.0;     // additive oracle noise per cost
  double target_scale = 1.0; // minimizer drawn as target_scale * N(0, I)
  double theta0_spread = 1.0;  // initial point: minimizer + spread * N(0, I)
};

// f_ell(theta) = 0.5 * || sum_j c_{ell j} theta_j - b_ell ||^2 with a shared
// minimizer across agents (b_ell = sum_j c_{ell j} theta*_j), plus optional
// additive Gaussian oracle noise. Everything about it is available in closed
// form, which makes it the workhorse for verification.
class CoupledQuadratic : public Problem {
 public:
  CoupledQuadratic(const QuadraticConfig& cfg, RandomStream& structure_stream);

  int agent_count() const override { return cfg_.num_agents; }
  const std::vector<int>& block_dims() const override { return block_dims_; }
  const std::vector<std::vector<int>>& rx_neighbor_sets() const override {
    return rx_sets_;
  }
  const std::vector<std::vector<int>>& tx_neighbor_sets() const override {
    return tx_sets_;
  }

  SamplePtr draw_sample(RandomStream& stream) const override;
  Vector cost_all(const Vector& joint_theta,
                  const Sample& sample) const override;
  Vector initial_theta(int agent, RandomStream& init_stream) const override;

  std::optional<Vector> local_objectives_closed_form(
      const Vector& joint_theta) const override;
  std::optional<Vector> gradient_closed_form(
      const Vector& joint_theta) const override;
  std::optional<TheoryConstants> theory_constants_at(
      const Vector& joint_theta) const override;

  /// Noiseless cost of agent ell.
  double local_cost(int ell, const Vector& joint_theta) const;
  /// Gradient of the noiseless cost of agent ell (full joint dimension).
  Vector local_gradient(int ell, const Vector& joint_theta) const;
  /// Residual sum_j c_{ell j} theta_j - b_ell.
  Vector residual(int ell, const Vector& joint_theta) const;

  const Eigen::MatrixXd& coefficients() const { return coeff_; }
  const Vector& minimizer() const { return minimizer_; }
  double objective_at_minimizer() const { return 0.0; }
  /// Largest per-cost curvature, max_ell ||c_ell||^2.
  double smoothness_constant() const;
  double noise_sd() const { return cfg_.noise_sd; }

 private:
  QuadraticConfig cfg_;
  std::vector<int> block_dims_;
  std::vector<int> offsets_;
  Eigen::MatrixXd coeff_;  // m x m, row ell = c_ell
  Vector minimizer_;       // joint theta*
  std::vector<Vector> targets_;  // b_ell
  std::vector<std::vector<int>> rx_sets_, tx_sets_;
};

}  // namespace zosim
