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

#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "zosim/errors.hpp"
#include "zosim/mlp.hpp"
#include "zosim/random.hpp"

using namespace zosim;

TEST_CASE("pathloss gains follow the tx-to-rx distances") {
  RandomStream stream(3, 0, StreamPurpose::kInit);
  const ChannelSetup setup = make_channel_setup(4, 2.2, stream);
  REQUIRE(setup.gain.rows() == 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const double dist =
          (setup.tx_locations.row(i) - setup.rx_locations.row(j)).norm();
      CHECK(setup.gain(j, i) == doctest::Approx(std::pow(dist, -2.2)));
    }
    // Receivers sit close to their own transmitter, so the direct link
    // is never the weakest one in its row.
    CHECK(setup.gain(j, j) == doctest::Approx(setup.gain.row(j).maxCoeff())
                                  .epsilon(1e-12));
  }
}

TEST_CASE("channel draws scale unit fading by the pathloss") {
  RandomStream structure(3, 0, StreamPurpose::kInit);
  const ChannelSetup setup = make_channel_setup(3, 2.2, structure);

  RandomStream fading(4, 0, StreamPurpose::kSample);
  const ChannelMatrix first = draw_channel(setup, 0.0, fading);
  RandomStream replay(4, 0, StreamPurpose::kSample);
  const ChannelMatrix again = draw_channel(setup, 0.0, replay);
  CHECK((first.h - again.h).cwiseAbs().maxCoeff() == 0.0);

  // With threshold 0 the clipped magnitudes are plain magnitudes.
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      CHECK(first.tilde_abs(j, i) == doctest::Approx(std::abs(first.h(j, i))));
    }
  }

  // A threshold above every magnitude zeroes the feature matrix but not h.
  RandomStream replay2(4, 0, StreamPurpose::kSample);
  const double top = first.tilde_abs.maxCoeff() * 2.0;
  const ChannelMatrix clipped = draw_channel(setup, top, replay2);
  CHECK(clipped.tilde_abs.isZero(0.0));
  CHECK((clipped.h - first.h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fading magnitudes average to the pathloss power") {
  // E |h|^2 = gain^2 for unit circularly symmetric fading.
  ChannelSetup setup;
  setup.tx_locations = Eigen::MatrixXd::Zero(1, 2);
  setup.rx_locations = Eigen::MatrixXd::Zero(1, 2);
  setup.gain = Eigen::MatrixXd::Constant(1, 1, 0.5);
  RandomStream stream(9, 0, StreamPurpose::kSample);
  double acc = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    acc += std::norm(draw_channel(setup, 0.0, stream).h(0, 0));
  }
  CHECK(acc / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("link rate applies the interference-limited SINR") {
  Eigen::MatrixXcd h(2, 2);
  h << std::complex<double>(1.0, 0.0), std::complex<double>(0.5, 0.0),
      std::complex<double>(0.0, 0.0), std::complex<double>(2.0, 0.0);
  Vector p(2);
  p << 1.0, 1.0;
  // Link 0: |1|^2 / (1 + |0.5|^2) -> log(1.8); link 1 sees no interference.
  CHECK(link_rate(0, p, h) == doctest::Approx(std::log(1.8)));
  CHECK(link_rate(1, p, h) == doctest::Approx(std::log(5.0)));

  p << 1.0, 0.0;  // silencing the interferer raises link 0 to log 2
  CHECK(link_rate(0, p, h) == doctest::Approx(std::log(2.0)));
  CHECK(link_rate(1, p, h) == doctest::Approx(0.0));

  CHECK_THROWS_AS(link_rate(2, p, h), DimensionError);
  CHECK_THROWS_AS(link_rate(0, Vector::Ones(3), h), DimensionError);
}

TEST_CASE("aggregation features chain transposed channel matrices") {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  b << 1.0, 0.0, 0.0, 2.0;

  int pads = -1;
  const std::vector<const Eigen::MatrixXd*> only_a = {&a};
  const Eigen::MatrixXd f1 = aggregation_features(only_a, 2, &pads);
  // Column 0 holds the column sums of the newest matrix; the missing
  // second slot pads by reusing it: a^T (a^T 1) = (22, 32).
  CHECK(pads == 1);
  CHECK(f1(0, 0) == doctest::Approx(4.0));
  CHECK(f1(1, 0) == doctest::Approx(6.0));
  CHECK(f1(0, 1) == doctest::Approx(22.0));
  CHECK(f1(1, 1) == doctest::Approx(32.0));

  const std::vector<const Eigen::MatrixXd*> both = {&b, &a};  // b newest
  const Eigen::MatrixXd f2 = aggregation_features(both, 2, &pads);
  // Hop 2 applies the older matrix first: b^T (a^T 1) = (4, 12).
  CHECK(pads == 0);
  CHECK(f2(0, 0) == doctest::Approx(1.0));
  CHECK(f2(1, 0) == doctest::Approx(2.0));
  CHECK(f2(0, 1) == doctest::Approx(4.0));
  CHECK(f2(1, 1) == doctest::Approx(12.0));

  CHECK_THROWS_AS(aggregation_features({}, 2, &pads), ConfigError);
  CHECK_THROWS_AS(aggregation_features(only_a, 0, &pads), ConfigError);
}

TEST_CASE("channel csv round-trips complex entries") {
  Eigen::MatrixXcd h(2, 2);
  h << std::complex<double>(0.1, -0.2), std::complex<double>(1e-17, 3.0),
      std::complex<double>(-4.5, 0.0), std::complex<double>(2.25, -1.125);
  const auto path =
      std::filesystem::temp_directory_path() / "zosim_channel_roundtrip.csv";
  export_channel_csv(h, path);
  const Eigen::MatrixXcd back = import_channel_csv(path);
  REQUIRE(back.rows() == 2);
  CHECK((back - h).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("policy problem shapes one parameter block per link") {
  RaConfig cfg;
  cfg.num_agents = 3;
  cfg.feature_hops = 5;
  RandomStream structure(6, 3, StreamPurpose::kInit);
  RaProblem p(cfg, structure);

  CHECK(p.agent_count() == 3);
  const int block = MlpPolicy::param_count(5);
  CHECK(block == 1141);
  for (int d : p.block_dims()) CHECK(d == block);
  CHECK(p.rx_neighbor_sets()[1] == std::vector<int>{0, 1, 2});
  CHECK(p.tx_neighbor_sets()[2] == std::vector<int>{0, 1, 2});
}

TEST_CASE("powers respect the configured ceiling") {
  RaConfig cfg;
  cfg.num_agents = 2;
  cfg.feature_hops = 3;
  cfg.power_max = 7.0;
  RandomStream structure(6, 2, StreamPurpose::kInit);
  RaProblem p(cfg, structure);

  RandomStream init(7, 0, StreamPurpose::kInit);
  Vector joint(p.total_dim());
  for (int i = 0; i < 2; ++i) {
    joint.segment(p.block_offsets()[i], p.block_dims()[i]) =
        p.initial_theta(i, init);
  }
  RandomStream stream(8, 2, StreamPurpose::kSample);
  const auto sample = p.draw_sample(stream);
  const Vector powers = p.powers(joint, *sample);
  // The sigmoid output is open-interval in exact arithmetic but saturates
  // to the endpoints in doubles once the pre-activation is large, which
  // chained feature aggregation readily produces.
  for (int i = 0; i < 2; ++i) {
    CHECK(powers(i) >= 0.0);
    CHECK(powers(i) <= 7.0);
  }
  // Costs are negated rates of the same realization.
  const Vector costs = p.cost_all(joint, *sample);
  for (int i = 0; i < 2; ++i) {
    CHECK(costs(i) <= 0.0);
  }
}

TEST_CASE("eval draws leave the training pad counter untouched") {
  RaConfig cfg;
  cfg.num_agents = 2;
  cfg.feature_hops = 4;
  RandomStream structure(6, 2, StreamPurpose::kInit);
  RaProblem p(cfg, structure);
  CHECK(p.pad_count() == 0);

  RandomStream stream(8, 2, StreamPurpose::kSample);
  p.draw_eval_sample(stream);
  CHECK(p.pad_count() == 0);

  // With no history the first training draw pads hops - 1 slots.
  const auto s0 = p.draw_sample(stream);
  CHECK(p.pad_count() == 3);

  p.advance_history({s0});
  p.draw_sample(stream);
  CHECK(p.pad_count() == 5);  // one more matrix known, two slots short
}

TEST_CASE("feature history is capped at hops minus one matrices") {
  RaConfig cfg;
  cfg.num_agents = 2;
  cfg.feature_hops = 2;
  RandomStream structure(6, 2, StreamPurpose::kInit);
  RaProblem p(cfg, structure);

  RandomStream stream(8, 2, StreamPurpose::kSample);
  std::vector<SamplePtr> drawn;
  for (int k = 0; k < 4; ++k) {
    drawn.push_back(p.draw_sample(stream));
    p.advance_history({drawn.back()});
  }
  // Only the first draw lacked history; afterwards one stored matrix
  // covers the second hop.
  CHECK(p.pad_count() == 1);
}
