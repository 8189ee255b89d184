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
#include <deque>
#include <filesystem>

#include "zosim/mlp.hpp"
#include "zosim/problem.hpp"

namespace zosim {

struct RaConfig {
  int num_agents = 6;
  int feature_hops = 5;          // K: per-agent feature length
  double threshold = 0.01;       // channel entries below this are zeroed
  double power_max = 10.0;       // policies emit powers in (0, power_max)
  double pathloss_exponent = 2.2;
  int eval_samples = 32;         // channel draws per metrics evaluation
  MlpInit policy_init = MlpInit::kFanInGaussian;
};

/// Fixed transmitter/receiver placement and the resulting pathloss gains.
/// Transmitters are uniform in [-m, m]^2; receiver i sits within +-m/4 of
/// transmitter i per coordinate. gain(j, i) multiplies the fading
/// coefficient from transmitter i at receiver j.
struct ChannelSetup {
  Eigen::MatrixXd tx_locations;  // m x 2
  Eigen::MatrixXd rx_locations;  // m x 2
  Eigen::MatrixXd gain;          // m x m pathloss amplitudes
};

/// One fading realization. h(j, i) is the coefficient from transmitter i to
/// receiver j; tilde_abs holds |h| with entries below the threshold zeroed.
struct ChannelMatrix {
  Eigen::MatrixXcd h;
  Eigen::MatrixXd tilde_abs;
};

ChannelSetup make_channel_setup(int num_agents, double pathloss_exponent,
                                RandomStream& stream);
ChannelMatrix draw_channel(const ChannelSetup& setup, double threshold,
                           RandomStream& stream);

/// Achievable rate of link i under transmit powers p:
/// log(1 + |h_ii|^2 p_i / (1 + sum_{j != i} |h_ij|^2 p_j)), natural log.
double link_rate(int i, const Vector& powers, const Eigen::MatrixXcd& h);

/// Multi-hop interference features. `recent` lists thresholded magnitude
/// matrices most recent first; entry (i, k) of the result is element i of
/// the k+1 most recent matrices (transposed) multiplied onto the all-ones
/// vector, newest applied last. A history shorter than `hops` is padded by
/// repeating its oldest matrix; `pads` counts the padded slots.
Eigen::MatrixXd aggregation_features(
    const std::vector<const Eigen::MatrixXd*>& recent, int hops, int* pads);

/// Row-major CSV with real and imaginary parts interleaved.
void export_channel_csv(const Eigen::MatrixXcd& h,
                        const std::filesystem::path& path);
Eigen::MatrixXcd import_channel_csv(const std::filesystem::path& path);

// Interference network power control. Each agent owns the flat parameters of
// one policy network mapping its feature column to a transmit power; a cost
// sample is one fading realization plus the features computed against the
// frozen history; agent ell's cost is the negated rate of its own link under
// everyone's powers.
class RaProblem : public Problem {
 public:
  RaProblem(const RaConfig& cfg, RandomStream& structure_stream);

  int agent_count() const override { return cfg_.num_agents; }
  const std::vector<int>& block_dims() const override { return block_dims_; }
  const std::vector<std::vector<int>>& rx_neighbor_sets() const override {
    return all_pairs_;
  }
  const std::vector<std::vector<int>>& tx_neighbor_sets() const override {
    return all_pairs_;
  }

  SamplePtr draw_sample(RandomStream& stream) const override;
  SamplePtr draw_eval_sample(RandomStream& stream) const override;
  Vector cost_all(const Vector& joint_theta,
                  const Sample& sample) const override;
  Vector initial_theta(int agent, RandomStream& init_stream) const override;
  void advance_history(const std::vector<SamplePtr>& tick_samples) override;

  /// sum_rate under the current policies and sum_rate_random_power under
  /// i.i.d. uniform powers, both averaged over eval_samples fresh draws,
  /// followed by the per-link policy rates.
  std::vector<std::pair<std::string, double>> extra_metrics(
      const Vector& joint_theta, RandomStream& eval_stream) const override;

  /// Per-agent powers for one sample's features.
  Vector powers(const Vector& joint_theta, const Sample& sample) const;

  const ChannelSetup& setup() const { return setup_; }
  const RaConfig& config() const { return cfg_; }
  std::int64_t pad_count() const override { return pad_count_; }
  /// First fading realization drawn so far, for export; null if none.
  const ChannelMatrix* first_channel() const {
    return first_channel_ ? &*first_channel_ : nullptr;
  }

 private:
  RaConfig cfg_;
  ChannelSetup setup_;
  std::vector<int> block_dims_;
  std::vector<std::vector<int>> all_pairs_;
  std::deque<Eigen::MatrixXd> history_;  // most recent first, <= hops-1 kept
  mutable std::int64_t pad_count_ = 0;
  mutable std::optional<ChannelMatrix> first_channel_;
};

}  // namespace zosim
