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

// Experiment runner. Exactly one of --config or --preset selects the work;
// `--preset list` prints the registry. Every run directory receives the
// resolved config, per-replicate CSVs, a mean CSV, and a theory report, so
// any output is reproducible from its own snapshot.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "zosim/config.hpp"
#include "zosim/errors.hpp"
#include "zosim/experiment.hpp"
#include "zosim/presets.hpp"
#include "zosim/verification.hpp"

namespace {

using zosim::RunConfig;

struct NamedRun {
  std::string name;  // output subdirectory; empty writes into --out itself
  nlohmann::ordered_json config;
};

int run_verify(std::uint64_t seed, const std::filesystem::path& out_dir) {
  const auto checks = zosim::run_verification_suite(seed);
  bool all_passed = true;
  nlohmann::ordered_json report;
  report["seed"] = seed;
  auto items = nlohmann::ordered_json::array();
  for (const zosim::CheckResult& c : checks) {
    all_passed &= c.passed;
    items.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"observed", c.observed},
                     {"bound", c.bound},
                     {"detail", c.detail}});
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (observed "
              << c.observed << ", bound " << c.bound << ")\n";
  }
  report["passed"] = all_passed;
  report["checks"] = std::move(items);

  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / "verification.json";
  std::ofstream out(path, std::ios::binary);
  out << report.dump(2) << "\n";
  std::cout << (all_passed ? "all checks passed" : "some checks FAILED")
            << ", report at " << path.string() << "\n";
  return all_passed ? 0 : 1;
}

void print_summary(const std::string& name, const std::filesystem::path& dir,
                   const zosim::ExperimentResult& result) {
  std::cout << (name.empty() ? std::string("run") : name) << ": "
            << result.replicates.size() << " replicate(s) -> "
            << dir.string();
  if (!result.replicates.empty()) {
    const auto& last = result.replicates.back();
    std::cout << " (final objective " << last.final_objective_mean;
    for (const auto& [key, value] : last.final_extras) {
      if (key == "sum_rate") std::cout << ", sum_rate " << value;
    }
    std::cout << ")";
  }
  if (!result.clean()) std::cout << " [INVARIANT VIOLATIONS]";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asynchronous zeroth-order optimization simulator"};
  std::string config_path;
  std::string preset_name;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON run config file");
  app.add_option("--preset", preset_name,
                 "named preset; 'list' prints the registry");
  app.add_option("--seed", seed, "override run.master_seed");
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--set", overrides,
                 "config override as dotted.path=value, may repeat");
  CLI11_PARSE(app, argc, argv);

  try {
    if (preset_name == "list") {
      for (const auto& [name, description] : zosim::list_presets()) {
        std::cout << name << "\t" << description << "\n";
      }
      return 0;
    }
    if (config_path.empty() == preset_name.empty()) {
      std::cerr << "exactly one of --config or --preset is required "
                   "(try --preset list)\n";
      return 1;
    }

    std::vector<NamedRun> runs;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        throw zosim::ConfigError("cannot open config file '" + config_path +
                                 "'");
      }
      runs.push_back({"", nlohmann::ordered_json::parse(in)});
    } else {
      const zosim::Preset* preset = zosim::find_preset(preset_name);
      if (preset == nullptr) {
        std::cerr << "unknown preset '" << preset_name
                  << "' (try --preset list)\n";
        return 1;
      }
      if (preset->verification) {
        return run_verify(app.count("--seed") > 0 ? seed : 1, out_dir);
      }
      for (const zosim::PresetVariant& v : preset->variants) {
        runs.push_back({v.name, zosim::run_config_to_json(v.config)});
      }
    }

    bool clean = true;
    for (NamedRun& run : runs) {
      for (const std::string& assignment : overrides) {
        zosim::apply_override(run.config, assignment);
      }
      if (app.count("--seed") > 0) {
        run.config["run"]["master_seed"] = seed;
      }
      const RunConfig cfg = zosim::parse_run_config(run.config);
      const std::filesystem::path dir =
          run.name.empty() ? std::filesystem::path(out_dir)
                           : std::filesystem::path(out_dir) / run.name;
      const zosim::ExperimentResult result = zosim::run_experiment(cfg, dir);
      print_summary(run.name, dir, result);
      clean &= result.clean();
    }
    if (!clean) {
      std::cerr << "at least one run recorded invariant violations\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
