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

#include "zosim/quadratic.hpp"

#include <cmath>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

struct QuadraticSample : Sample {
  Vector noise;  // one additive term per agent cost
};

}  // namespace

CoupledQuadratic::CoupledQuadratic(const QuadraticConfig& cfg,
                                   RandomStream& structure_stream)
    : cfg_(cfg) {
  const int m = cfg_.num_agents;
  if (m < 1 || cfg_.block_dim < 1) {
    throw ConfigError("CoupledQuadratic: need num_agents >= 1, block_dim >= 1");
  }
  if (cfg_.noise_sd < 0.0) {
    throw ConfigError("CoupledQuadratic: noise_sd must be non-negative");
  }
  block_dims_.assign(m, cfg_.block_dim);
  offsets_ = block_offsets();

  coeff_ = Eigen::MatrixXd::Zero(m, m);
  if (cfg_.coupling == QuadCoupling::kHouseholder) {
    coeff_.setConstant(-2.0 / m);
    coeff_.diagonal().array() += 1.0;
  } else {
    for (int ell = 0; ell < m; ++ell) {
      coeff_(ell, ell) = 1.0;
      if (m > 1) {
        coeff_(ell, (ell + 1) % m) += cfg_.ring_strength;
        coeff_(ell, (ell + m - 1) % m) += cfg_.ring_strength;
      }
    }
  }

  minimizer_ = cfg_.target_scale * gaussian_vector(structure_stream, total_dim());
  targets_.reserve(m);
  for (int ell = 0; ell < m; ++ell) {
    Vector b = Vector::Zero(cfg_.block_dim);
    for (int j = 0; j < m; ++j) {
      if (coeff_(ell, j) != 0.0) {
        b += coeff_(ell, j) * minimizer_.segment(offsets_[j], cfg_.block_dim);
      }
    }
    targets_.push_back(std::move(b));
  }

  rx_sets_.assign(m, {});
  tx_sets_.assign(m, {});
  for (int ell = 0; ell < m; ++ell) {
    for (int j = 0; j < m; ++j) {
      if (coeff_(ell, j) != 0.0) {
        tx_sets_[ell].push_back(j);  // cost ell reads theta_j
        rx_sets_[j].push_back(ell);  // so agent j needs query ell
      }
    }
  }
}

SamplePtr CoupledQuadratic::draw_sample(RandomStream& stream) const {
  auto s = std::make_shared<QuadraticSample>();
  s->noise = cfg_.noise_sd > 0.0
                 ? Vector(cfg_.noise_sd *
                          gaussian_vector(stream, cfg_.num_agents))
                 : Vector(Vector::Zero(cfg_.num_agents));
  return s;
}

Vector CoupledQuadratic::cost_all(const Vector& joint_theta,
                                  const Sample& sample) const {
  if (joint_theta.size() != total_dim()) {
    throw DimensionError("CoupledQuadratic::cost_all: joint dimension mismatch");
  }
  const auto& qs = dynamic_cast<const QuadraticSample&>(sample);
  Vector costs(cfg_.num_agents);
  for (int ell = 0; ell < cfg_.num_agents; ++ell) {
    costs(ell) = local_cost(ell, joint_theta) + qs.noise(ell);
  }
  return costs;
}

Vector CoupledQuadratic::initial_theta(int agent,
                                       RandomStream& init_stream) const {
  return minimizer_.segment(offsets_[agent], cfg_.block_dim) +
         cfg_.theta0_spread * gaussian_vector(init_stream, cfg_.block_dim);
}

std::optional<Vector> CoupledQuadratic::local_objectives_closed_form(
    const Vector& joint_theta) const {
  Vector out(cfg_.num_agents);
  for (int ell = 0; ell < cfg_.num_agents; ++ell) {
    out(ell) = local_cost(ell, joint_theta);
  }
  return out;
}

std::optional<Vector> CoupledQuadratic::gradient_closed_form(
    const Vector& joint_theta) const {
  Vector grad = Vector::Zero(total_dim());
  for (int ell = 0; ell < cfg_.num_agents; ++ell) {
    grad += local_gradient(ell, joint_theta);
  }
  grad /= static_cast<double>(cfg_.num_agents);
  return grad;
}

std::optional<TheoryConstants> CoupledQuadratic::theory_constants_at(
    const Vector& joint_theta) const {
  TheoryConstants tc;
  tc.L = smoothness_constant();
  tc.sigma = 0.0;  // noise is additive, so cost gradients are exact
  double g = 0.0;
  for (int ell = 0; ell < cfg_.num_agents; ++ell) {
    g = std::max(g, local_gradient(ell, joint_theta).norm());
  }
  tc.G = g;
  tc.L0 = g;
  if (cfg_.noise_sd > 0.0) {
    tc.L_xi = 1.0;  // cost shifts one-for-one with its noise coordinate
    tc.v = cfg_.noise_sd * std::sqrt(static_cast<double>(cfg_.num_agents));
  }
  return tc;
}

double CoupledQuadratic::local_cost(int ell, const Vector& joint_theta) const {
  return 0.5 * residual(ell, joint_theta).squaredNorm();
}

Vector CoupledQuadratic::local_gradient(int ell,
                                        const Vector& joint_theta) const {
  const Vector res = residual(ell, joint_theta);
  Vector grad = Vector::Zero(total_dim());
  for (int j = 0; j < cfg_.num_agents; ++j) {
    if (coeff_(ell, j) != 0.0) {
      grad.segment(offsets_[j], cfg_.block_dim) = coeff_(ell, j) * res;
    }
  }
  return grad;
}

Vector CoupledQuadratic::residual(int ell, const Vector& joint_theta) const {
  Vector res = -targets_[ell];
  for (int j = 0; j < cfg_.num_agents; ++j) {
    if (coeff_(ell, j) != 0.0) {
      res += coeff_(ell, j) * joint_theta.segment(offsets_[j], cfg_.block_dim);
    }
  }
  return res;
}

double CoupledQuadratic::smoothness_constant() const {
  double worst = 0.0;
  for (int ell = 0; ell < cfg_.num_agents; ++ell) {
    worst = std::max(worst, coeff_.row(ell).squaredNorm());
  }
  return worst;
}

}  // namespace zosim
