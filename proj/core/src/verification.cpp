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

#include "zosim/verification.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "zosim/agent.hpp"
#include "zosim/diagnostics.hpp"
#include "zosim/errors.hpp"
#include "zosim/function_problem.hpp"
#include "zosim/quadratic.hpp"
#include "zosim/random.hpp"
#include "zosim/smoothing.hpp"

namespace zosim {
namespace {

constexpr double kOracleMu = 0.5;
constexpr double kOracleNoiseSd = 0.1;
constexpr int kLogCoshDim = 6;

QuadraticConfig oracle_quadratic_config() {
  QuadraticConfig cfg;
  cfg.num_agents = 3;
  cfg.block_dim = 2;
  cfg.coupling = QuadCoupling::kHouseholder;
  cfg.noise_sd = kOracleNoiseSd;
  return cfg;
}

struct OracleMoments {
  std::vector<Vector> mean;      // per agent, per component
  std::vector<Vector> variance;  // per agent, per component (sample variance)
  Vector expected_joint;         // negated closed-form gradient, stacked
  TheoryConstants tc;
  int total_dim = 0;
  std::int64_t trials = 0;
};

// Runs `trials` fresh queries at a fixed joint point with zero delivery
// delay: every query of trial k is timestamped k and handed to every agent
// before the update directions are rebuilt through the regular memory and
// perturbation-buffer machinery.
OracleMoments measure_oracle_moments(bool paired_samples, int batch_size,
                                     std::int64_t trials, std::uint64_t seed) {
  if (trials < 2) {
    throw ConfigError("measure_oracle_moments: trials must be >= 2");
  }
  const QuadraticConfig qcfg = oracle_quadratic_config();
  const int m = qcfg.num_agents;
  RandomStream structure(seed, m, StreamPurpose::kInit);
  CoupledQuadratic problem(qcfg, structure);

  Vector theta(problem.total_dim());
  std::vector<AgentState> agents;
  std::vector<RandomStream> perturb;
  agents.reserve(m);
  const auto offsets = problem.block_offsets();
  for (int i = 0; i < m; ++i) {
    RandomStream init(seed, i, StreamPurpose::kInit);
    Vector block = problem.initial_theta(i, init);
    theta.segment(offsets[i], block.size()) = block;
    agents.emplace_back(i, block, 2, problem.rx_neighbor_sets()[i],
                        problem.tx_neighbor_sets()[i]);
    perturb.emplace_back(seed, i, StreamPurpose::kPerturbation);
  }
  RandomStream samples(seed, m, StreamPurpose::kSample);

  std::vector<Vector> sum(m), sumsq(m);
  for (int i = 0; i < m; ++i) {
    sum[i] = Vector::Zero(qcfg.block_dim);
    sumsq[i] = Vector::Zero(qcfg.block_dim);
  }
  std::vector<double> base_vals(batch_size), pert_vals(batch_size);
  for (std::int64_t k = 0; k < trials; ++k) {
    Vector perturbed = theta;
    for (int i = 0; i < m; ++i) {
      Vector u = gaussian_vector(perturb[i], qcfg.block_dim);
      perturbed.segment(offsets[i], qcfg.block_dim) += kOracleMu * u;
      agents[i].perturbations.push(k, std::move(u));
    }
    std::vector<Vector> base_costs(batch_size), pert_costs(batch_size);
    for (int j = 0; j < batch_size; ++j) {
      SamplePtr s = problem.draw_sample(samples);
      SamplePtr sbar =
          paired_samples ? s : problem.draw_sample(samples);
      base_costs[j] = problem.cost_all(theta, *s);
      pert_costs[j] = problem.cost_all(perturbed, *sbar);
    }
    for (int src = 0; src < m; ++src) {
      for (int j = 0; j < batch_size; ++j) {
        base_vals[static_cast<std::size_t>(j)] = base_costs[j](src);
        pert_vals[static_cast<std::size_t>(j)] = pert_costs[j](src);
      }
      const QueryRecord rec{
          src, k, compute_query(src, base_vals, pert_vals, kOracleMu, m)};
      for (int dst = 0; dst < m; ++dst) {
        agents[dst].memory.ingest(rec);
      }
    }
    for (int i = 0; i < m; ++i) {
      const Vector dir = build_update_direction(agents[i], k, true);
      sum[i] += dir;
      sumsq[i] += dir.cwiseProduct(dir);
    }
  }

  OracleMoments out;
  out.trials = trials;
  out.total_dim = problem.total_dim();
  out.mean.resize(m);
  out.variance.resize(m);
  const double n = static_cast<double>(trials);
  for (int i = 0; i < m; ++i) {
    out.mean[i] = sum[i] / n;
    out.variance[i] =
        (sumsq[i] - n * out.mean[i].cwiseProduct(out.mean[i])) / (n - 1.0);
  }
  const auto grad = problem.gradient_closed_form(theta);
  out.expected_joint = -*grad;
  out.tc = *problem.theory_constants_at(theta);
  return out;
}

double log_cosh_cost(const Vector& x) { return log_cosh_sum(x); }

Vector smoothing_point(std::uint64_t seed) {
  RandomStream init(seed, 0, StreamPurpose::kInit);
  return gaussian_vector(init, kLogCoshDim);
}

}  // namespace

CheckResult check_unbiased_oracle(bool paired_samples, std::int64_t trials,
                                  std::uint64_t seed) {
  const OracleMoments m = measure_oracle_moments(paired_samples, 1, trials,
                                                 seed);
  double worst_z = 0.0;
  int block = 0;
  const int block_dim = static_cast<int>(m.mean[0].size());
  for (std::size_t i = 0; i < m.mean.size(); ++i) {
    for (int c = 0; c < block_dim; ++c) {
      const double se = std::sqrt(m.variance[i](c) /
                                  static_cast<double>(m.trials));
      const double expected =
          m.expected_joint(static_cast<int>(i) * block_dim + c);
      const double z = std::abs(m.mean[i](c) - expected) / se;
      if (z > worst_z) {
        worst_z = z;
        block = static_cast<int>(i);
      }
    }
  }
  CheckResult r;
  r.name = paired_samples ? "unbiased_oracle_paired" : "unbiased_oracle_unpaired";
  r.observed = worst_z;
  r.bound = 4.0;
  r.passed = worst_z <= r.bound;
  std::ostringstream d;
  d << "worst |mean - expected| z-score over " << m.mean.size() * m.mean[0].size()
    << " components (agent " << block << ", " << m.trials << " queries)";
  r.detail = d.str();
  return r;
}

CheckResult check_variance_bound(bool paired_samples, int batch_size,
                                 std::int64_t trials, std::uint64_t seed) {
  const OracleMoments m =
      measure_oracle_moments(paired_samples, batch_size, trials, seed);
  SmoothingConfig cfg;
  cfg.mu = kOracleMu;
  cfg.batch_size = batch_size;
  cfg.paired_samples = paired_samples;
  const double bound = variance_bound(m.tc, m.total_dim, cfg);
  double worst = 0.0;
  for (const Vector& v : m.variance) {
    worst = std::max(worst, v.maxCoeff());
  }
  CheckResult r;
  std::ostringstream name;
  name << "variance_bound_" << (paired_samples ? "paired" : "unpaired")
       << "_b" << batch_size;
  r.name = name.str();
  r.observed = worst;
  r.bound = bound;
  r.passed = worst < bound;
  std::ostringstream d;
  d << "max per-component variance over " << m.trials
    << " queries; bound uses L=" << m.tc.L << " sigma=" << m.tc.sigma
    << " G=" << m.tc.G << " v=" << m.tc.v;
  r.detail = d.str();
  return r;
}

CheckResult check_value_smoothing(double mu, std::int64_t samples,
                                  std::uint64_t seed) {
  const Vector theta = smoothing_point(seed);
  RandomStream stream(seed, 1, StreamPurpose::kSample);
  const McEstimate est =
      smoothed_value_mc(log_cosh_cost, theta, mu, samples, stream);
  const double gap = std::abs(est.value - log_cosh_cost(theta));
  const double bound =
      mu * mu * static_cast<double>(kLogCoshDim) / 2.0 +
      3.0 * est.standard_error;
  CheckResult r;
  std::ostringstream name;
  name << "value_smoothing_mu" << mu;
  r.name = name.str();
  r.observed = gap;
  r.bound = bound;
  r.passed = gap <= bound;
  std::ostringstream d;
  d << "|smoothed - exact| at a fixed point, " << samples
    << " samples, curvature bound 1";
  r.detail = d.str();
  return r;
}

CheckResult check_gradient_smoothing(double mu, std::int64_t samples,
                                     std::uint64_t seed) {
  const Vector theta = smoothing_point(seed);
  RandomStream stream(seed, 2, StreamPurpose::kSample);
  const VectorEstimate est =
      mc_smoothed_gradient(log_cosh_cost, theta, mu, samples, stream);
  const Vector exact = finite_diff_gradient(log_cosh_cost, theta, 1e-5);
  const double gap = (est.value - exact).norm();
  const double bound =
      (mu / 2.0) * std::pow(static_cast<double>(kLogCoshDim) + 3.0, 1.5) +
      3.0 * est.norm_standard_error();
  CheckResult r;
  std::ostringstream name;
  name << "gradient_smoothing_mu" << mu;
  r.name = name.str();
  r.observed = gap;
  r.bound = bound;
  r.passed = gap <= bound;
  std::ostringstream d;
  d << "||mc smoothed gradient - central differences|| at a fixed point, "
    << samples << " samples, h=1e-5";
  r.detail = d.str();
  return r;
}

CheckResult check_surrogate_smoothness(std::int64_t trials,
                                       std::uint64_t seed) {
  QuadraticConfig qcfg = oracle_quadratic_config();
  qcfg.noise_sd = 0.0;
  const int m = qcfg.num_agents;
  RandomStream structure(seed, m, StreamPurpose::kInit);
  CoupledQuadratic problem(qcfg, structure);
  RandomStream points(seed, 1, StreamPurpose::kSample);
  const double lipschitz =
      std::sqrt(problem.smoothness_constant()) / std::sqrt(double(m));
  const auto offsets = problem.block_offsets();
  const int n = problem.total_dim();
  double worst = 0.0;
  for (std::int64_t k = 0; k < trials; ++k) {
    for (int ell = 0; ell < m; ++ell) {
      Vector diff_sum = Vector::Zero(qcfg.block_dim);
      double stacked_sq = 0.0;
      for (int src : problem.rx_neighbor_sets()[ell]) {
        const Vector a = gaussian_vector(points, n);
        const Vector b = gaussian_vector(points, n);
        const Vector ga = problem.local_gradient(src, a);
        const Vector gb = problem.local_gradient(src, b);
        diff_sum += ga.segment(offsets[ell], qcfg.block_dim) -
                    gb.segment(offsets[ell], qcfg.block_dim);
        stacked_sq += (a - b).squaredNorm();
      }
      const double lhs = (diff_sum / static_cast<double>(m)).norm();
      const double rhs = lipschitz * std::sqrt(stacked_sq);
      if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
  }
  CheckResult r;
  r.name = "surrogate_smoothness";
  r.observed = worst;
  r.bound = 1.0 + 1e-12;
  r.passed = worst <= r.bound;
  std::ostringstream d;
  d << "max ratio of averaged block-gradient difference to L/sqrt(m) times "
       "the stacked distance over " << trials << " random pairs";
  r.detail = d.str();
  return r;
}

std::vector<CheckResult> run_verification_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::int64_t oracle_trials = 200000;
  out.push_back(check_unbiased_oracle(true, oracle_trials, seed));
  out.push_back(check_unbiased_oracle(false, oracle_trials, seed));
  for (const bool paired : {true, false}) {
    out.push_back(check_variance_bound(paired, 1, oracle_trials, seed));
    out.push_back(check_variance_bound(paired, 10, oracle_trials / 10, seed));
  }
  const std::int64_t smoothing_samples = 200000;
  for (const double mu : {0.1, 0.5, 1.0}) {
    out.push_back(check_value_smoothing(mu, smoothing_samples, seed));
    out.push_back(check_gradient_smoothing(mu, smoothing_samples, seed));
  }
  out.push_back(check_surrogate_smoothness(20000, seed));
  return out;
}

}  // namespace zosim
