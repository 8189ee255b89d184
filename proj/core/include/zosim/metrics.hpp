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
#include <utility>
#include <vector>

namespace zosim {

/// One tick of run telemetry. Staleness columns describe the memories right
/// after delivery at this tick; objective and gradient columns describe the
/// parameters right after this tick's updates.
struct MetricsRow {
  std::int64_t t = 0;
  double gamma = 0.0;
  double objective_mean = 0.0;
  std::vector<double> objective_per_agent;
  double grad_norm_sq = 0.0;         // NaN when not evaluated this tick
  double runmin_grad_norm_sq = 0.0;  // NaN until first evaluation
  double staleness_mean = 0.0;
  double staleness_max = 0.0;
  double drift_mean = 0.0;  // ||theta^t - theta^T||^2 over stored records
  double drift_max = 0.0;
  std::int64_t realized_dmax = 0;  // running maximum over the run
  std::int64_t stale_drops = 0;    // cumulative
  std::int64_t pads = 0;           // cumulative feature-history pads
  std::int64_t in_flight = 0;
  std::int64_t delivered = 0;
  double elapsed_ms = 0.0;
  std::vector<std::pair<std::string, double>> extras;
};

/// Stable header for a row shape: fixed core columns, obj_<i> per agent,
/// then the extras' names in stored order.
std::vector<std::string> csv_header(const MetricsRow& shape);

/// Writes rows with an LF-terminated header even when rows is empty; floats
/// carry 17 significant digits so values round-trip exactly. All rows must
/// share the first row's shape.
void emit_csv(const std::vector<MetricsRow>& rows,
              const std::filesystem::path& path);

/// Column-wise mean across equally shaped runs (used for seed averaging).
std::vector<MetricsRow> mean_rows(
    const std::vector<std::vector<MetricsRow>>& runs);

}  // namespace zosim
