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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zosim/random.hpp"
#include "zosim/smoothing.hpp"

namespace zosim {

/// Opaque per-problem noise/world realization. One Sample corresponds to one
/// oracle evaluation slot shared by every agent measuring in that slot.
struct Sample {
  virtual ~Sample() = default;
};
using SamplePtr = std::shared_ptr<const Sample>;

// A multi-agent stochastic cost. Parameters are a concatenation of per-agent
// blocks; cost_all evaluates every agent's noisy cost at one joint point
// under one shared sample, which is how simultaneous measurements behave in
// the systems being modeled.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int agent_count() const = 0;
  virtual const std::vector<int>& block_dims() const = 0;

  /// rx set of agent i: sources whose costs depend on theta_i (their queries
  /// enter i's update). tx set of agent i: agents whose parameters enter
  /// cost i (they need i's query). Both sorted ascending.
  virtual const std::vector<std::vector<int>>& rx_neighbor_sets() const = 0;
  virtual const std::vector<std::vector<int>>& tx_neighbor_sets() const = 0;

  virtual SamplePtr draw_sample(RandomStream& stream) const = 0;
  virtual Vector cost_all(const Vector& joint_theta,
                          const Sample& sample) const = 0;

  /// Sample drawn for diagnostics only. Defaults to the training draw;
  /// problems that keep per-draw counters override this so that evaluation
  /// leaves them untouched.
  virtual SamplePtr draw_eval_sample(RandomStream& stream) const {
    return draw_sample(stream);
  }

  virtual Vector initial_theta(int agent, RandomStream& init_stream) const = 0;

  /// Noiseless per-agent costs, when available in closed form.
  virtual std::optional<Vector> local_objectives_closed_form(
      const Vector& joint_theta) const {
    return std::nullopt;
  }
  /// Gradient of the averaged objective, when available in closed form.
  virtual std::optional<Vector> gradient_closed_form(
      const Vector& joint_theta) const {
    return std::nullopt;
  }

  /// Constants for the second-moment bound at a given point, when known.
  virtual std::optional<TheoryConstants> theory_constants_at(
      const Vector& joint_theta) const {
    return std::nullopt;
  }

  /// Hook called once per tick, after all of the tick's oracle evaluations,
  /// with the samples drawn in that tick (in draw order).
  virtual void advance_history(const std::vector<SamplePtr>& tick_samples) {}

  /// Additional per-tick metrics (name -> value) estimated at joint_theta;
  /// the stream is dedicated to evaluation and never feeds training.
  virtual std::vector<std::pair<std::string, double>> extra_metrics(
      const Vector& joint_theta, RandomStream& eval_stream) const {
    return {};
  }

  /// Cumulative count of padded feature slots, for problems that pad.
  virtual std::int64_t pad_count() const { return 0; }

  int total_dim() const {
    int n = 0;
    for (int d : block_dims()) n += d;
    return n;
  }

  std::vector<int> block_offsets() const {
    std::vector<int> offsets;
    offsets.reserve(block_dims().size());
    int at = 0;
    for (int d : block_dims()) {
      offsets.push_back(at);
      at += d;
    }
    return offsets;
  }
};

}  // namespace zosim
