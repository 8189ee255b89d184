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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "zosim/errors.hpp"
#include "zosim/presets.hpp"
#include "zosim/quadratic.hpp"

using namespace zosim;
using nlohmann::ordered_json;

namespace {

RunConfig tiny_quadratic() {
  ordered_json j = {
      {"quadratic", {{"num_agents", 2}, {"block_dim", 2}, {"noise_sd", 0.1}}},
      {"comm", {{"d_comm", 2}}},
      {"activity", {{"p_query", 0.8}, {"p_update", 0.8}, {"window", 3}}},
      {"smoothing", {{"mu", 0.2}, {"paired_samples", true}}},
      {"stepsize", {{"kind", "inv_sqrt"}, {"gamma0", 0.1}}},
      {"run",
       {{"num_ticks", 40},
        {"master_seed", 7},
        {"replicates", 2},
        {"metrics_period", 4}}},
  };
  return parse_run_config(j);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("problems are rebuilt per replicate seed") {
  const RunConfig cfg = tiny_quadratic();
  auto p1 = build_problem(cfg, 7);
  auto p1b = build_problem(cfg, 7);
  auto p2 = build_problem(cfg, 8);
  auto* q1 = dynamic_cast<CoupledQuadratic*>(p1.get());
  auto* q1b = dynamic_cast<CoupledQuadratic*>(p1b.get());
  auto* q2 = dynamic_cast<CoupledQuadratic*>(p2.get());
  REQUIRE(q1 != nullptr);
  CHECK((q1->minimizer() - q1b->minimizer()).norm() == 0.0);
  CHECK((q1->minimizer() - q2->minimizer()).norm() > 0.0);
}

TEST_CASE("gossip graphs come from the block size or a file") {
  RunConfig cfg = tiny_quadratic();
  CHECK_FALSE(build_gossip_graph(cfg).has_value());

  cfg.comm_mode = CommMode::kGossip;
  cfg.quadratic.num_agents = 6;
  cfg.gossip_block = 2;
  const auto ring = build_gossip_graph(cfg);
  REQUIRE(ring.has_value());
  CHECK(ring->size() == 6);
  CHECK(ring->diameter() == 3);

  const auto path =
      std::filesystem::temp_directory_path() / "zosim_experiment_graph.txt";
  Graph::full(6).save_adjacency(path);
  cfg.graph_file = path.string();
  const auto loaded = build_gossip_graph(cfg);
  REQUIRE(loaded.has_value());
  CHECK(loaded->diameter() == 1);
  std::filesystem::remove(path);
}

TEST_CASE("theory-scaled stepsizes resolve against the curvature") {
  // Householder curvature is exactly 1, the direct staleness bound is
  // window + d_comm = 2, so M = (2 * 2 * 2 + 1) / 2 and the fraction 0.9
  // lands at 0.2. The configured gamma0 only caps the result.
  ordered_json j = {
      {"quadratic", {{"num_agents", 2}}},
      {"stepsize", {{"theory_fraction", 0.9}, {"gamma0", 10.0}}},
      {"run", {{"num_ticks", 4}, {"replicates", 1}}},
  };
  RunConfig cfg = parse_run_config(j);
  const ExperimentResult r = run_replicates(cfg);
  CHECK(r.resolved_gamma0 == doctest::Approx(0.2));
  CHECK(r.configured_dmax == 2);

  ordered_json capped = j;
  apply_override(capped, "stepsize.gamma0=0.05");
  const ExperimentResult rc = run_replicates(parse_run_config(capped));
  CHECK(rc.resolved_gamma0 == doctest::Approx(0.05));
}

TEST_CASE("replicates report their seeds and converge cleanly") {
  const RunConfig cfg = tiny_quadratic();
  const ExperimentResult r = run_replicates(cfg);
  REQUIRE(r.replicates.size() == 2);
  REQUIRE(r.replicate_rows.size() == 2);
  CHECK(r.replicates[0].seed == 7);
  CHECK(r.replicates[1].seed == 8);
  CHECK(r.mean.size() == r.replicate_rows[0].size());
  CHECK(r.total_dim == 4);
  CHECK(r.clean());
  REQUIRE(r.smoothness.has_value());
  CHECK(*r.smoothness == doctest::Approx(1.0));
  REQUIRE(r.descent.has_value());
  CHECK(r.descent->M > 0.0);
  REQUIRE(r.second_moment_bound.has_value());
  CHECK(*r.second_moment_bound > 0.0);

  // Distinct seeds give distinct trajectories.
  CHECK(r.replicate_rows[0].back().objective_mean !=
        r.replicate_rows[1].back().objective_mean);
}

TEST_CASE("the theory report names every replicate") {
  const RunConfig cfg = tiny_quadratic();
  const ExperimentResult r = run_replicates(cfg);
  const ordered_json report = theory_report(cfg, r);
  CHECK(report["problem"] == "quadratic");
  CHECK(report["total_dim"] == 4);
  CHECK(report["configured_dmax"] == 5);  // window 3 + d_comm 2
  CHECK(report["replicates"].size() == 2);
  CHECK(report["replicates"][0]["seed"] == 7);
  CHECK(report["replicates"][0]["delay_violations"] == 0);
  CHECK(report["descent"].contains("M"));
  CHECK(report["second_moment_bound"].is_number());
}

TEST_CASE("experiment directories are reproduced byte for byte") {
  const RunConfig cfg = tiny_quadratic();
  const auto base = std::filesystem::temp_directory_path() / "zosim_exp_test";
  std::filesystem::remove_all(base);
  const auto dir_a = base / "a";
  const auto dir_b = base / "b";
  run_experiment(cfg, dir_a);
  run_experiment(cfg, dir_b);

  const char* files[] = {"rep0.csv", "rep1.csv", "mean.csv",
                         "resolved_config.json", "theory_report.json"};
  for (const char* f : files) {
    CAPTURE(f);
    REQUIRE(std::filesystem::exists(dir_a / f));
    CHECK(slurp(dir_a / f) == slurp(dir_b / f));
    CHECK(!slurp(dir_a / f).empty());
  }
  // Direct mode writes no relay graph.
  CHECK_FALSE(std::filesystem::exists(dir_a / "graph.txt"));

  // The resolved config reloads into the same run.
  const RunConfig back = load_run_config(dir_a / "resolved_config.json");
  CHECK(back.num_ticks == cfg.num_ticks);
  CHECK(back.master_seed == cfg.master_seed);
  std::filesystem::remove_all(base);
}

TEST_CASE("gossip experiments persist their relay graph") {
  ordered_json j = {
      {"quadratic", {{"num_agents", 4}}},
      {"comm", {{"mode", "gossip"}, {"gossip_block", 2}}},
      {"smoothing", {{"mu", 0.2}, {"paired_samples", true}}},
      {"run", {{"num_ticks", 10}, {"replicates", 1}}},
  };
  const RunConfig cfg = parse_run_config(j);
  const auto dir =
      std::filesystem::temp_directory_path() / "zosim_exp_gossip";
  std::filesystem::remove_all(dir);
  run_experiment(cfg, dir);
  REQUIRE(std::filesystem::exists(dir / "graph.txt"));
  const Graph g = Graph::load_adjacency(dir / "graph.txt");
  CHECK(g.size() == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("every registered preset parses and validates") {
  const auto listing = list_presets();
  CHECK(listing.size() >= 8);
  for (const auto& [name, description] : listing) {
    CAPTURE(name);
    const Preset* preset = find_preset(name);
    REQUIRE(preset != nullptr);
    CHECK_FALSE(description.empty());
    for (const auto& variant : preset->variants) {
      CAPTURE(variant.name);
      CHECK_NOTHROW(validate_run_config(variant.config));
      // The stored config must survive serialization unchanged.
      const auto json = run_config_to_json(variant.config);
      CHECK(run_config_to_json(parse_run_config(json)).dump() == json.dump());
    }
  }
  CHECK(find_preset("no_such_preset") == nullptr);
}
