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
#include <string>

#include <nlohmann/json.hpp>

#include "zosim/diagnostics.hpp"
#include "zosim/quadratic.hpp"
#include "zosim/scheduler.hpp"
#include "zosim/smoothing.hpp"
#include "zosim/transport.hpp"
#include "zosim/wireless.hpp"

namespace zosim {

// Everything a run needs, as plain data. The JSON layout mirrors the nesting
// here: problem, quadratic, wireless, comm, activity, smoothing, stepsize,
// run. Every field has a default, so {} is a valid config; parsing is strict
// and rejects unknown fields by dotted path.
struct RunConfig {
  std::string problem = "quadratic";  // "quadratic" | "wireless"
  QuadraticConfig quadratic;
  RaConfig wireless;

  CommMode comm_mode = CommMode::kDirect;
  TransportConfig transport;
  // Gossip relay graph: the overlap-block topology over gossip_block, or an
  // adjacency file when graph_file is non-empty.
  int gossip_block = 2;
  std::string graph_file;

  ActivityConfig activity;
  SmoothingConfig smoothing;

  StepsizeSchedule stepsize;
  // When positive, the schedule's base step becomes
  // min(theory_fraction / M, gamma0), with M computed from the problem's
  // curvature and the configured staleness bound; gamma0 then acts as a cap.
  double theory_fraction = 0.0;

  std::int64_t num_ticks = 1000;
  std::uint64_t master_seed = 1;
  int replicates = 1;
  int metrics_period = 1;
  bool track_gradient = true;
  bool track_extras = true;
  double coherence_ms = 25.0;
  int mc_gradient_period = 100;
  int mc_gradient_samples = 200;
};

/// Strict parse: unknown fields, type mismatches, and invalid values all
/// throw ConfigError naming the dotted field path.
RunConfig parse_run_config(const nlohmann::ordered_json& j);

RunConfig load_run_config(const std::filesystem::path& path);

/// Full snapshot with every field populated; parse_run_config round-trips it.
nlohmann::ordered_json run_config_to_json(const RunConfig& cfg);

/// Applies one "dotted.path=value" assignment onto a JSON document before
/// parsing. The value is parsed as JSON when possible and kept as a string
/// otherwise, so numbers, booleans, and arrays all work.
void apply_override(nlohmann::ordered_json& j, const std::string& assignment);

/// Cross-field rules that individual setters cannot see. parse_run_config
/// calls this; it is exposed for configs built in code.
void validate_run_config(const RunConfig& cfg);

}  // namespace zosim
