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

// Microbenchmarks for the per-tick hot paths: perturbation draws, policy
// forwards, query reduction, and whole scheduler ticks on both problems.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "zosim/mlp.hpp"
#include "zosim/quadratic.hpp"
#include "zosim/random.hpp"
#include "zosim/scheduler.hpp"
#include "zosim/smoothing.hpp"
#include "zosim/wireless.hpp"

namespace {

using namespace zosim;

void BM_GaussianVector(benchmark::State& state) {
  RandomStream stream(7, 0, StreamPurpose::kPerturbation);
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_vector(stream, dim));
  }
}
BENCHMARK(BM_GaussianVector)->Arg(30)->Arg(300);

void BM_MlpForward(benchmark::State& state) {
  const auto input_dim = static_cast<int>(state.range(0));
  RandomStream stream(7, 0, StreamPurpose::kInit);
  const Vector params =
      MlpPolicy::init_params(input_dim, MlpInit::kFanInGaussian, stream);
  const Vector input = gaussian_vector(stream, input_dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MlpPolicy::forward(params, input));
  }
}
BENCHMARK(BM_MlpForward)->Arg(5)->Arg(30);

void BM_ComputeQuery(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  std::vector<double> unperturbed(batch, 1.25);
  std::vector<double> perturbed(batch, 0.75);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_query(0, unperturbed, perturbed, 0.5, 6));
  }
}
BENCHMARK(BM_ComputeQuery)->Arg(1)->Arg(10)->Arg(100);

void BM_QuadraticTick(benchmark::State& state) {
  QuadraticConfig qc;
  qc.num_agents = static_cast<int>(state.range(0));
  qc.noise_sd = 0.1;
  RandomStream structure(11, qc.num_agents, StreamPurpose::kInit);
  auto problem = std::make_shared<CoupledQuadratic>(qc, structure);

  SimulationOptions opts;
  opts.activity.p_query = 0.9;
  opts.activity.p_update = 0.9;
  opts.activity.p_transmit = 0.9;
  opts.activity.window = 2;
  opts.transport.d_comm = 2;
  opts.smoothing.paired_samples = true;
  opts.stepsize.gamma0 = 0.01;
  opts.track_gradient = false;
  opts.metrics_period = 1 << 20;

  Simulation sim(problem, opts);
  for (auto _ : state) {
    sim.tick();
    benchmark::DoNotOptimize(sim.now());
  }
}
BENCHMARK(BM_QuadraticTick)->Arg(4)->Arg(16);

void BM_WirelessCost(benchmark::State& state) {
  RaConfig rc;
  rc.num_agents = 6;
  RandomStream structure(11, rc.num_agents, StreamPurpose::kInit);
  RaProblem problem(rc, structure);

  RandomStream init(11, 0, StreamPurpose::kInit);
  Eigen::Index total = 0;
  for (const int d : problem.block_dims()) total += d;
  Vector joint(total);
  Eigen::Index offset = 0;
  for (int i = 0; i < rc.num_agents; ++i) {
    const Vector block = problem.initial_theta(i, init);
    joint.segment(offset, block.size()) = block;
    offset += block.size();
  }

  RandomStream samples(11, 6, StreamPurpose::kSample);
  const SamplePtr sample = problem.draw_sample(samples);
  for (auto _ : state) {
    benchmark::DoNotOptimize(problem.cost_all(joint, *sample));
  }
}
BENCHMARK(BM_WirelessCost);

}  // namespace

BENCHMARK_MAIN();
