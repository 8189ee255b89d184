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

#include "zosim/wireless.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

struct RaSample : Sample {
  ChannelMatrix channel;
  Eigen::MatrixXd features;  // m x hops, row i feeds policy i
};

std::shared_ptr<RaSample> build_sample(
    const ChannelSetup& setup, const RaConfig& cfg,
    const std::deque<Eigen::MatrixXd>& history, RandomStream& stream,
    int* pads) {
  auto s = std::make_shared<RaSample>();
  s->channel = draw_channel(setup, cfg.threshold, stream);
  std::vector<const Eigen::MatrixXd*> recent;
  recent.push_back(&s->channel.tilde_abs);
  for (const auto& past : history) {
    recent.push_back(&past);
  }
  s->features = aggregation_features(recent, cfg.feature_hops, pads);
  return s;
}

}  // namespace

ChannelSetup make_channel_setup(int num_agents, double pathloss_exponent,
                                RandomStream& stream) {
  if (num_agents < 1) {
    throw ConfigError("make_channel_setup: need at least one agent");
  }
  const double extent = static_cast<double>(num_agents);
  ChannelSetup setup;
  setup.tx_locations.resize(num_agents, 2);
  setup.rx_locations.resize(num_agents, 2);
  for (int i = 0; i < num_agents; ++i) {
    for (int c = 0; c < 2; ++c) {
      setup.tx_locations(i, c) = extent * (2.0 * stream.next_uniform() - 1.0);
    }
    // Receiver i stays within a quarter-extent box around its transmitter.
    for (int c = 0; c < 2; ++c) {
      setup.rx_locations(i, c) =
          setup.tx_locations(i, c) +
          (extent / 4.0) * (2.0 * stream.next_uniform() - 1.0);
    }
  }
  setup.gain.resize(num_agents, num_agents);
  for (int j = 0; j < num_agents; ++j) {    // receiver
    for (int i = 0; i < num_agents; ++i) {  // transmitter
      const double dist =
          (setup.tx_locations.row(i) - setup.rx_locations.row(j)).norm();
      setup.gain(j, i) = std::pow(dist, -pathloss_exponent);
    }
  }
  return setup;
}

ChannelMatrix draw_channel(const ChannelSetup& setup, double threshold,
                           RandomStream& stream) {
  const int m = static_cast<int>(setup.gain.rows());
  ChannelMatrix ch;
  ch.h.resize(m, m);
  ch.tilde_abs.resize(m, m);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      // Unit-variance circularly symmetric complex fading times pathloss.
      const double re = stream.next_gaussian() * inv_sqrt2;
      const double im = stream.next_gaussian() * inv_sqrt2;
      ch.h(j, i) = setup.gain(j, i) * std::complex<double>(re, im);
      const double mag = std::abs(ch.h(j, i));
      ch.tilde_abs(j, i) = mag >= threshold ? mag : 0.0;
    }
  }
  return ch;
}

double link_rate(int i, const Vector& powers, const Eigen::MatrixXcd& h) {
  const int m = static_cast<int>(h.rows());
  if (powers.size() != m || i < 0 || i >= m) {
    throw DimensionError("link_rate: power vector or link index mismatch");
  }
  double interference = 0.0;
  for (int j = 0; j < m; ++j) {
    if (j != i) {
      interference += std::norm(h(i, j)) * powers(j);
    }
  }
  const double signal = std::norm(h(i, i)) * powers(i);
  return std::log(1.0 + signal / (1.0 + interference));
}

Eigen::MatrixXd aggregation_features(
    const std::vector<const Eigen::MatrixXd*>& recent, int hops, int* pads) {
  if (recent.empty() || hops < 1) {
    throw ConfigError("aggregation_features: need history and hops >= 1");
  }
  const int m = static_cast<int>(recent.front()->rows());
  const int padded = std::max(0, hops - static_cast<int>(recent.size()));
  auto matrix_at = [&](int back) -> const Eigen::MatrixXd& {
    // History slots beyond what exists reuse the oldest available matrix.
    return back < static_cast<int>(recent.size()) ? *recent[back]
                                                  : *recent.back();
  };
  Eigen::MatrixXd features(m, hops);
  for (int k = 1; k <= hops; ++k) {
    // Product over the k most recent matrices applied to the ones vector,
    // oldest applied first.
    Vector v = Vector::Ones(m);
    for (int back = k - 1; back >= 0; --back) {
      v = matrix_at(back).transpose() * v;
    }
    features.col(k - 1) = v;
  }
  if (pads != nullptr) {
    *pads = padded;
  }
  return features;
}

void export_channel_csv(const Eigen::MatrixXcd& h,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("export_channel_csv: cannot write " + path.string());
  }
  char buf[32];
  for (Eigen::Index j = 0; j < h.rows(); ++j) {
    for (Eigen::Index i = 0; i < h.cols(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", h(j, i).real());
      out << (i == 0 ? "" : ",") << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", h(j, i).imag());
      out << "," << buf;
    }
    out << "\n";
  }
}

Eigen::MatrixXcd import_channel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("import_channel_csv: cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXcd h(m, m);
  for (int j = 0; j < m; ++j) {
    if (static_cast<int>(rows[j].size()) != 2 * m) {
      throw ConfigError("import_channel_csv: row " + std::to_string(j) +
                        " must hold " + std::to_string(2 * m) + " values");
    }
    for (int i = 0; i < m; ++i) {
      h(j, i) = std::complex<double>(rows[j][2 * i], rows[j][2 * i + 1]);
    }
  }
  return h;
}

RaProblem::RaProblem(const RaConfig& cfg, RandomStream& structure_stream)
    : cfg_(cfg),
      setup_(make_channel_setup(cfg.num_agents, cfg.pathloss_exponent,
                                structure_stream)) {
  if (cfg_.feature_hops < 1 || cfg_.eval_samples < 1) {
    throw ConfigError("RaProblem: feature_hops and eval_samples must be >= 1");
  }
  if (cfg_.threshold < 0.0 || cfg_.power_max <= 0.0) {
    throw ConfigError("RaProblem: threshold >= 0 and power_max > 0 required");
  }
  block_dims_.assign(cfg_.num_agents, MlpPolicy::param_count(cfg_.feature_hops));
  all_pairs_.assign(cfg_.num_agents, {});
  for (int i = 0; i < cfg_.num_agents; ++i) {
    for (int j = 0; j < cfg_.num_agents; ++j) {
      all_pairs_[i].push_back(j);  // every rate couples every power
    }
  }
}

SamplePtr RaProblem::draw_sample(RandomStream& stream) const {
  int pads = 0;
  auto s = build_sample(setup_, cfg_, history_, stream, &pads);
  pad_count_ += pads;
  if (!first_channel_) {
    first_channel_ = s->channel;
  }
  return s;
}

SamplePtr RaProblem::draw_eval_sample(RandomStream& stream) const {
  int pads = 0;
  return build_sample(setup_, cfg_, history_, stream, &pads);
}

Vector RaProblem::powers(const Vector& joint_theta,
                         const Sample& sample) const {
  const auto& rs = dynamic_cast<const RaSample&>(sample);
  if (joint_theta.size() != total_dim()) {
    throw DimensionError("RaProblem: joint dimension mismatch");
  }
  const int block = block_dims_[0];
  Vector p(cfg_.num_agents);
  for (int i = 0; i < cfg_.num_agents; ++i) {
    const Vector params = joint_theta.segment(
        static_cast<Eigen::Index>(i) * block, block);
    p(i) = MlpPolicy::forward(params, rs.features.row(i).transpose(),
                              cfg_.power_max);
  }
  return p;
}

Vector RaProblem::cost_all(const Vector& joint_theta,
                           const Sample& sample) const {
  const auto& rs = dynamic_cast<const RaSample&>(sample);
  const Vector p = powers(joint_theta, sample);
  Vector costs(cfg_.num_agents);
  for (int ell = 0; ell < cfg_.num_agents; ++ell) {
    costs(ell) = -link_rate(ell, p, rs.channel.h);
  }
  return costs;
}

Vector RaProblem::initial_theta(int agent, RandomStream& init_stream) const {
  return MlpPolicy::init_params(cfg_.feature_hops, cfg_.policy_init,
                                init_stream);
}

void RaProblem::advance_history(const std::vector<SamplePtr>& tick_samples) {
  for (const auto& sp : tick_samples) {
    const auto& rs = dynamic_cast<const RaSample&>(*sp);
    history_.push_front(rs.channel.tilde_abs);
  }
  const std::size_t keep = static_cast<std::size_t>(
      std::max(0, cfg_.feature_hops - 1));
  while (history_.size() > keep) {
    history_.pop_back();
  }
}

std::vector<std::pair<std::string, double>> RaProblem::extra_metrics(
    const Vector& joint_theta, RandomStream& eval_stream) const {
  double sum_rate = 0.0;
  double sum_rate_random = 0.0;
  Vector per_link = Vector::Zero(cfg_.num_agents);
  for (int s = 0; s < cfg_.eval_samples; ++s) {
    // Built directly so evaluation never touches the training-side
    // pad counter or the exported first realization.
    int eval_pads = 0;
    const auto sample = build_sample(setup_, cfg_, history_, eval_stream,
                                     &eval_pads);
    const auto& rs = *sample;
    const Vector p = powers(joint_theta, *sample);
    Vector p_random(cfg_.num_agents);
    for (int i = 0; i < cfg_.num_agents; ++i) {
      p_random(i) = cfg_.power_max * eval_stream.next_uniform();
    }
    for (int i = 0; i < cfg_.num_agents; ++i) {
      const double r = link_rate(i, p, rs.channel.h);
      sum_rate += r;
      per_link(i) += r;
      sum_rate_random += link_rate(i, p_random, rs.channel.h);
    }
  }
  const double n = static_cast<double>(cfg_.eval_samples);
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("sum_rate", sum_rate / n);
  out.emplace_back("sum_rate_random_power", sum_rate_random / n);
  for (int i = 0; i < cfg_.num_agents; ++i) {
    out.emplace_back("rate_" + std::to_string(i), per_link(i) / n);
  }
  return out;
}

}  // namespace zosim
