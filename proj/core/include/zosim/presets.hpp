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

#include <string>
#include <utility>
#include <vector>

#include "zosim/config.hpp"

namespace zosim {

// A preset is a named batch of fully resolved run configs; multi-variant
// presets produce one output subdirectory per variant. The sizes here are
// desk scale: every preset finishes in minutes on one core.
struct PresetVariant {
  std::string name;
  RunConfig config;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<PresetVariant> variants;
  // True for the proposition-check preset, which runs the Monte-Carlo
  // verification suite instead of simulations.
  bool verification = false;
};

const std::vector<Preset>& preset_registry();

/// nullptr when the name is unknown.
const Preset* find_preset(const std::string& name);

std::vector<std::pair<std::string, std::string>> list_presets();

}  // namespace zosim
