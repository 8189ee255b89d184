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

#include "zosim/random.hpp"

namespace zosim {

enum class MlpInit {
  kFanInGaussian,  // weights ~ N(0, 1/fan_in), biases zero
  kZero,
};

// Fixed-shape policy network {input_dim, 30, 30, 1} with ReLU hidden
// activations and a sigmoid output scaled to (0, output_scale). Parameters
// live in one flat vector laid out as
//   [W1 row-major (30 x in), b1 (30), W2 (30 x 30), b2 (30), W3 (1 x 30), b3]
// so that a parameter block is exactly what one agent owns and perturbs.
class MlpPolicy {
 public:
  static constexpr int kHidden = 30;

  /// 30*input_dim + 991 for the fixed shape above.
  static int param_count(int input_dim);

  static Vector init_params(int input_dim, MlpInit init, RandomStream& stream);

  /// Scalar output in (0, output_scale). Throws DimensionError when
  /// params.size() != param_count(input.size()).
  static double forward(const Vector& params, const Vector& input,
                        double output_scale = 10.0);
};

}  // namespace zosim
