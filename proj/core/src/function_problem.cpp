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

#include "zosim/function_problem.hpp"

#include <cmath>
#include <numbers>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

struct ScalarSample : Sample {
  double noise = 0.0;
};

}  // namespace

FunctionProblem::FunctionProblem(int dim,
                                 std::function<double(const Vector&)> f,
                                 std::function<Vector(const Vector&)> gradient,
                                 double noise_sd, Vector theta0)
    : block_dims_{dim},
      sets_{{0}},
      f_(std::move(f)),
      gradient_(std::move(gradient)),
      noise_sd_(noise_sd),
      theta0_(std::move(theta0)) {
  if (dim < 1) {
    throw ConfigError("FunctionProblem: dim must be >= 1");
  }
  if (!f_) {
    throw ConfigError("FunctionProblem: cost function is required");
  }
}

SamplePtr FunctionProblem::draw_sample(RandomStream& stream) const {
  auto s = std::make_shared<ScalarSample>();
  s->noise = noise_sd_ > 0.0 ? noise_sd_ * stream.next_gaussian() : 0.0;
  return s;
}

Vector FunctionProblem::cost_all(const Vector& joint_theta,
                                 const Sample& sample) const {
  const auto& ss = dynamic_cast<const ScalarSample&>(sample);
  Vector out(1);
  out(0) = f_(joint_theta) + ss.noise;
  return out;
}

Vector FunctionProblem::initial_theta(int agent,
                                      RandomStream& init_stream) const {
  if (theta0_.size() == block_dims_[0]) {
    return theta0_;
  }
  return gaussian_vector(init_stream, block_dims_[0]);
}

std::optional<Vector> FunctionProblem::local_objectives_closed_form(
    const Vector& joint_theta) const {
  Vector out(1);
  out(0) = f_(joint_theta);
  return out;
}

std::optional<Vector> FunctionProblem::gradient_closed_form(
    const Vector& joint_theta) const {
  if (!gradient_) {
    return std::nullopt;
  }
  return gradient_(joint_theta);
}

double log_cosh_sum(const Vector& x) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    // log(cosh(x)) = |x| + log1p(exp(-2|x|)) - log(2), stable for large |x|
    const double a = std::abs(x(k));
    total += a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
  }
  return total;
}

Vector log_cosh_gradient(const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    g(k) = std::tanh(x(k));
  }
  return g;
}

}  // namespace zosim
