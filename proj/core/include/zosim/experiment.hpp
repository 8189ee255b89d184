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
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "zosim/config.hpp"
#include "zosim/diagnostics.hpp"
#include "zosim/graph.hpp"
#include "zosim/metrics.hpp"
#include "zosim/problem.hpp"
#include "zosim/scheduler.hpp"

namespace zosim {

// One replicate uses master_seed + index for every stream it owns,
// including the problem's structure draw, so replicates are independent
// instances of the configured distribution.

std::shared_ptr<Problem> build_problem(const RunConfig& cfg,
                                       std::uint64_t seed);

/// Relay graph for gossip mode; nullopt in direct mode.
std::optional<Graph> build_gossip_graph(const RunConfig& cfg);

/// Simulation options for one replicate. Resolves theory-scaled stepsizes
/// against the quadratic curvature constant and the configured staleness
/// bound.
SimulationOptions build_options(const RunConfig& cfg,
                                std::uint64_t replicate_seed);

struct ReplicateSummary {
  std::uint64_t seed = 0;
  std::int64_t realized_dmax = 0;
  InvariantCounters invariants;
  double final_objective_mean = 0.0;
  double final_grad_norm_sq = 0.0;
  double runmin_grad_norm_sq = 0.0;
  std::vector<std::pair<std::string, double>> final_extras;
};

struct ExperimentResult {
  std::vector<std::vector<MetricsRow>> replicate_rows;
  std::vector<MetricsRow> mean;
  std::vector<ReplicateSummary> replicates;
  double resolved_gamma0 = 0.0;
  int configured_dmax = 0;
  int total_dim = 0;
  std::optional<double> smoothness = std::nullopt;
  std::optional<DescentConstants> descent = std::nullopt;
  // Second-moment bound per batched query, at replicate 0's initial point.
  std::optional<double> second_moment_bound = std::nullopt;

  /// True when every replicate finished with zero invariant violations.
  bool clean() const;
};

/// Runs all replicates in memory.
ExperimentResult run_replicates(const RunConfig& cfg);

nlohmann::ordered_json theory_report(const RunConfig& cfg,
                                     const ExperimentResult& result);

/// run_replicates plus the on-disk layout: rep<k>.csv per replicate,
/// mean.csv, resolved_config.json, theory_report.json, and graph.txt in
/// gossip mode. Within one directory the layout is self-describing; a rerun
/// with the same config reproduces every byte.
ExperimentResult run_experiment(const RunConfig& cfg,
                                const std::filesystem::path& out_dir);

}  // namespace zosim
