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

#include "zosim/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <utility>

#include "zosim/errors.hpp"
#include "zosim/random.hpp"
#include "zosim/smoothing.hpp"

namespace zosim {
namespace {

int configured_agent_count(const RunConfig& cfg) {
  return cfg.problem == "wireless" ? cfg.wireless.num_agents
                                   : cfg.quadratic.num_agents;
}

// Stepsize and staleness bound shared by every replicate. The quadratic's
// curvature constant depends only on the coefficient layout, not on the
// drawn minimizer, so resolving against a throwaway instance is exact.
struct ResolvedSchedule {
  int dmax = 0;
  StepsizeSchedule stepsize;
  std::optional<double> smoothness;
};

ResolvedSchedule resolve_schedule(const RunConfig& cfg) {
  ResolvedSchedule out;
  const int m = configured_agent_count(cfg);
  int diameter = 0;
  if (cfg.comm_mode == CommMode::kGossip) {
    diameter = build_gossip_graph(cfg)->diameter();
  }
  out.dmax = staleness_bound(cfg.comm_mode, cfg.activity.window,
                             cfg.transport.d_comm, diameter);
  out.stepsize = cfg.stepsize;
  if (cfg.problem == "quadratic") {
    RandomStream structure(0, m, StreamPurpose::kInit);
    const CoupledQuadratic probe(cfg.quadratic, structure);
    out.smoothness = probe.smoothness_constant();
  }
  if (cfg.theory_fraction > 0.0) {
    const double big_m =
        theory_constants(*out.smoothness, m, out.dmax, 0.0).M;
    out.stepsize.gamma0 =
        std::min(cfg.theory_fraction / big_m, cfg.stepsize.gamma0);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  out << body;
}

}  // namespace

std::shared_ptr<Problem> build_problem(const RunConfig& cfg,
                                       std::uint64_t seed) {
  const int m = configured_agent_count(cfg);
  RandomStream structure(seed, m, StreamPurpose::kInit);
  if (cfg.problem == "wireless") {
    return std::make_shared<RaProblem>(cfg.wireless, structure);
  }
  return std::make_shared<CoupledQuadratic>(cfg.quadratic, structure);
}

std::optional<Graph> build_gossip_graph(const RunConfig& cfg) {
  if (cfg.comm_mode != CommMode::kGossip) return std::nullopt;
  if (!cfg.graph_file.empty()) {
    return Graph::load_adjacency(cfg.graph_file);
  }
  return Graph::block_overlap(configured_agent_count(cfg), cfg.gossip_block);
}

SimulationOptions build_options(const RunConfig& cfg,
                                std::uint64_t replicate_seed) {
  const ResolvedSchedule res = resolve_schedule(cfg);
  SimulationOptions opts;
  opts.comm_mode = cfg.comm_mode;
  opts.activity = cfg.activity;
  opts.smoothing = cfg.smoothing;
  opts.stepsize = res.stepsize;
  opts.transport = cfg.transport;
  opts.master_seed = replicate_seed;
  opts.metrics_period = cfg.metrics_period;
  opts.track_gradient = cfg.track_gradient;
  opts.track_extras = cfg.track_extras;
  opts.coherence_ms = cfg.coherence_ms;
  opts.mc_gradient_period = cfg.mc_gradient_period;
  opts.mc_gradient_samples = cfg.mc_gradient_samples;
  return opts;
}

bool ExperimentResult::clean() const {
  for (const ReplicateSummary& r : replicates) {
    if (r.invariants.delay_violations != 0 ||
        r.invariants.staleness_violations != 0 ||
        r.invariants.ordering_violations != 0) {
      return false;
    }
  }
  return true;
}

ExperimentResult run_replicates(const RunConfig& cfg) {
  validate_run_config(cfg);
  const ResolvedSchedule res = resolve_schedule(cfg);
  const std::optional<Graph> gossip = build_gossip_graph(cfg);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  ExperimentResult out;
  out.resolved_gamma0 = res.stepsize.gamma0;
  out.configured_dmax = res.dmax;
  out.smoothness = res.smoothness;

  for (int k = 0; k < cfg.replicates; ++k) {
    const std::uint64_t seed =
        cfg.master_seed + static_cast<std::uint64_t>(k);
    auto problem = build_problem(cfg, seed);
    SimulationOptions opts = build_options(cfg, seed);
    Simulation sim(problem, opts, gossip ? &*gossip : nullptr);

    if (k == 0) {
      out.total_dim = problem->total_dim();
      if (res.smoothness) {
        out.descent =
            theory_constants(*res.smoothness, problem->agent_count(),
                             res.dmax, stepsize(0, res.stepsize));
      }
      if (const auto tc = problem->theory_constants_at(sim.joint_theta())) {
        out.second_moment_bound =
            variance_bound(*tc, problem->total_dim(), cfg.smoothing);
      }
    }

    std::vector<MetricsRow> rows = sim.run(cfg.num_ticks);

    ReplicateSummary summary;
    summary.seed = seed;
    summary.realized_dmax = sim.realized_staleness_max();
    summary.invariants = sim.invariants();
    summary.final_objective_mean = nan;
    summary.final_grad_norm_sq = nan;
    summary.runmin_grad_norm_sq = nan;
    if (!rows.empty()) {
      const MetricsRow& last = rows.back();
      summary.final_objective_mean = last.objective_mean;
      summary.final_grad_norm_sq = last.grad_norm_sq;
      summary.runmin_grad_norm_sq = last.runmin_grad_norm_sq;
      summary.final_extras = last.extras;
    }
    out.replicate_rows.push_back(std::move(rows));
    out.replicates.push_back(std::move(summary));
  }

  out.mean = mean_rows(out.replicate_rows);
  return out;
}

nlohmann::ordered_json theory_report(const RunConfig& cfg,
                                     const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["problem"] = cfg.problem;
  j["total_dim"] = result.total_dim;
  j["comm_mode"] = cfg.comm_mode == CommMode::kGossip ? "gossip" : "direct";
  j["configured_dmax"] = result.configured_dmax;
  j["resolved_gamma0"] = result.resolved_gamma0;
  j["smoothness"] =
      result.smoothness ? nlohmann::ordered_json(*result.smoothness)
                        : nlohmann::ordered_json(nullptr);
  if (result.descent) {
    j["descent"] = {{"M", result.descent->M},
                    {"stepsize_upper", result.descent->stepsize_upper},
                    {"eta", result.descent->eta}};
  } else {
    j["descent"] = nullptr;
  }
  j["second_moment_bound"] =
      result.second_moment_bound
          ? nlohmann::ordered_json(*result.second_moment_bound)
          : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json reps = nlohmann::ordered_json::array();
  for (const ReplicateSummary& r : result.replicates) {
    nlohmann::ordered_json e;
    e["seed"] = r.seed;
    e["realized_dmax"] = r.realized_dmax;
    e["delay_violations"] = r.invariants.delay_violations;
    e["staleness_violations"] = r.invariants.staleness_violations;
    e["ordering_violations"] = r.invariants.ordering_violations;
    e["final_objective_mean"] = r.final_objective_mean;
    e["final_grad_norm_sq"] = r.final_grad_norm_sq;
    e["runmin_grad_norm_sq"] = r.runmin_grad_norm_sq;
    auto extras = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.final_extras) extras[name] = value;
    e["final_extras"] = std::move(extras);
    reps.push_back(std::move(e));
  }
  j["replicates"] = std::move(reps);
  return j;
}

ExperimentResult run_experiment(const RunConfig& cfg,
                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  ExperimentResult result = run_replicates(cfg);

  for (std::size_t k = 0; k < result.replicate_rows.size(); ++k) {
    emit_csv(result.replicate_rows[k],
             out_dir / ("rep" + std::to_string(k) + ".csv"));
  }
  emit_csv(result.mean, out_dir / "mean.csv");
  write_text(out_dir / "resolved_config.json",
             run_config_to_json(cfg).dump(2) + "\n");
  write_text(out_dir / "theory_report.json",
             theory_report(cfg, result).dump(2) + "\n");
  if (const auto gossip = build_gossip_graph(cfg)) {
    gossip->save_adjacency(out_dir / "graph.txt");
  }
  return result;
}

}  // namespace zosim
