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

#include <functional>
#include <utility>

#include "zosim/problem.hpp"

namespace zosim {

// Single-agent wrapper around an arbitrary scalar function, optionally with
// additive Gaussian oracle noise and a closed-form gradient. Mostly useful
// for hand-checkable traces and smooth test functions.
class FunctionProblem : public Problem {
 public:
  FunctionProblem(int dim, std::function<double(const Vector&)> f,
                  std::function<Vector(const Vector&)> gradient = nullptr,
                  double noise_sd = 0.0, Vector theta0 = {});

  int agent_count() const override { return 1; }
  const std::vector<int>& block_dims() const override { return block_dims_; }
  const std::vector<std::vector<int>>& rx_neighbor_sets() const override {
    return sets_;
  }
  const std::vector<std::vector<int>>& tx_neighbor_sets() const override {
    return sets_;
  }

  SamplePtr draw_sample(RandomStream& stream) const override;
  Vector cost_all(const Vector& joint_theta,
                  const Sample& sample) const override;
  Vector initial_theta(int agent, RandomStream& init_stream) const override;

  std::optional<Vector> local_objectives_closed_form(
      const Vector& joint_theta) const override;
  std::optional<Vector> gradient_closed_form(
      const Vector& joint_theta) const override;

 private:
  std::vector<int> block_dims_;
  std::vector<std::vector<int>> sets_;
  std::function<double(const Vector&)> f_;
  std::function<Vector(const Vector&)> gradient_;
  double noise_sd_;
  Vector theta0_;
};

/// sum_k log(cosh(x_k)): smooth, gradient tanh(x), curvature bounded by 1.
double log_cosh_sum(const Vector& x);
Vector log_cosh_gradient(const Vector& x);

}  // namespace zosim
