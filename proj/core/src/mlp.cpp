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

#include "zosim/mlp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "zosim/errors.hpp"

namespace zosim {

int MlpPolicy::param_count(int input_dim) {
  if (input_dim <= 0) {
    throw DimensionError("MlpPolicy: input_dim must be positive");
  }
  const int h = kHidden;
  return h * input_dim + h + h * h + h + h + 1;
}

Vector MlpPolicy::init_params(int input_dim, MlpInit init,
                              RandomStream& stream) {
  const int total = param_count(input_dim);
  if (init == MlpInit::kZero) {
    return Vector::Zero(total);
  }
  const int h = kHidden;
  Vector p(total);
  int at = 0;
  auto layer = [&](int rows, int fan_in) {
    const double sd = 1.0 / std::sqrt(static_cast<double>(fan_in));
    p.segment(at, rows * fan_in) = sd * gaussian_vector(stream, rows * fan_in);
    at += rows * fan_in;
    p.segment(at, rows).setZero();  // biases
    at += rows;
  };
  layer(h, input_dim);
  layer(h, h);
  layer(1, h);
  return p;
}

double MlpPolicy::forward(const Vector& params, const Vector& input,
                          double output_scale) {
  const int in = static_cast<int>(input.size());
  const int h = kHidden;
  const int expected = param_count(in);
  if (static_cast<int>(params.size()) != expected) {
    throw DimensionError("MlpPolicy::forward: expected " +
                         std::to_string(expected) + " parameters, got " +
                         std::to_string(params.size()));
  }

  const double* d = params.data();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      w1(d, h, in);
  Eigen::Map<const Vector> b1(d + h * in, h);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      w2(d + h * in + h, h, h);
  Eigen::Map<const Vector> b2(d + h * in + h + h * h, h);
  Eigen::Map<const Vector> w3(d + h * in + h + h * h + h, h);
  const double b3 = d[expected - 1];

  const Vector h1 = (w1 * input + b1).cwiseMax(0.0);
  const Vector h2 = (w2 * h1 + b2).cwiseMax(0.0);
  const double z = w3.dot(h2) + b3;
  return output_scale / (1.0 + std::exp(-z));
}

}  // namespace zosim
