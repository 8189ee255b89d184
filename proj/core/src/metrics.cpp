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

#include "zosim/metrics.hpp"

#include <cstdio>
#include <fstream>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_shape(const MetricsRow& row, const MetricsRow& shape,
                 std::int64_t index) {
  if (row.objective_per_agent.size() != shape.objective_per_agent.size() ||
      row.extras.size() != shape.extras.size()) {
    throw ProtocolError("emit_csv: row " + std::to_string(index) +
                        " does not match the first row's shape");
  }
  for (std::size_t e = 0; e < row.extras.size(); ++e) {
    if (row.extras[e].first != shape.extras[e].first) {
      throw ProtocolError("emit_csv: extras renamed at row " +
                          std::to_string(index));
    }
  }
}

}  // namespace

std::vector<std::string> csv_header(const MetricsRow& shape) {
  std::vector<std::string> h = {"t", "gamma", "objective_mean"};
  for (std::size_t i = 0; i < shape.objective_per_agent.size(); ++i) {
    h.push_back("obj_" + std::to_string(i));
  }
  const char* rest[] = {"grad_norm_sq", "runmin_grad_norm_sq",
                        "staleness_mean", "staleness_max", "drift_mean",
                        "drift_max", "realized_dmax", "stale_drops", "pads",
                        "in_flight", "delivered", "elapsed_ms"};
  h.insert(h.end(), std::begin(rest), std::end(rest));
  for (const auto& [name, value] : shape.extras) {
    h.push_back(name);
  }
  return h;
}

void emit_csv(const std::vector<MetricsRow>& rows,
              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("emit_csv: cannot write " + path.string());
  }
  const MetricsRow shape = rows.empty() ? MetricsRow{} : rows.front();
  const auto header = csv_header(shape);
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c == 0 ? "" : ",") << header[c];
  }
  out << "\n";
  std::int64_t index = 0;
  for (const MetricsRow& row : rows) {
    check_shape(row, shape, index++);
    out << row.t << "," << fmt_double(row.gamma) << ","
        << fmt_double(row.objective_mean);
    for (double v : row.objective_per_agent) {
      out << "," << fmt_double(v);
    }
    out << "," << fmt_double(row.grad_norm_sq) << ","
        << fmt_double(row.runmin_grad_norm_sq) << ","
        << fmt_double(row.staleness_mean) << ","
        << fmt_double(row.staleness_max) << "," << fmt_double(row.drift_mean)
        << "," << fmt_double(row.drift_max) << "," << row.realized_dmax << ","
        << row.stale_drops << "," << row.pads << "," << row.in_flight << ","
        << row.delivered << "," << fmt_double(row.elapsed_ms);
    for (const auto& [name, value] : row.extras) {
      out << "," << fmt_double(value);
    }
    out << "\n";
  }
}

std::vector<MetricsRow> mean_rows(
    const std::vector<std::vector<MetricsRow>>& runs) {
  if (runs.empty()) {
    throw ConfigError("mean_rows: need at least one run");
  }
  const std::size_t ticks = runs.front().size();
  for (const auto& run : runs) {
    if (run.size() != ticks) {
      throw ProtocolError("mean_rows: runs have different lengths");
    }
  }
  const double count = static_cast<double>(runs.size());
  std::vector<MetricsRow> mean;
  mean.reserve(ticks);
  for (std::size_t t = 0; t < ticks; ++t) {
    MetricsRow acc = runs.front()[t];
    for (std::size_t r = 1; r < runs.size(); ++r) {
      const MetricsRow& row = runs[r][t];
      check_shape(row, acc, static_cast<std::int64_t>(t));
      acc.gamma += row.gamma;
      acc.objective_mean += row.objective_mean;
      for (std::size_t i = 0; i < acc.objective_per_agent.size(); ++i) {
        acc.objective_per_agent[i] += row.objective_per_agent[i];
      }
      acc.grad_norm_sq += row.grad_norm_sq;
      acc.runmin_grad_norm_sq += row.runmin_grad_norm_sq;
      acc.staleness_mean += row.staleness_mean;
      acc.staleness_max += row.staleness_max;
      acc.drift_mean += row.drift_mean;
      acc.drift_max += row.drift_max;
      acc.realized_dmax += row.realized_dmax;
      acc.stale_drops += row.stale_drops;
      acc.pads += row.pads;
      acc.in_flight += row.in_flight;
      acc.delivered += row.delivered;
      acc.elapsed_ms += row.elapsed_ms;
      for (std::size_t e = 0; e < acc.extras.size(); ++e) {
        acc.extras[e].second += row.extras[e].second;
      }
    }
    acc.gamma /= count;
    acc.objective_mean /= count;
    for (double& v : acc.objective_per_agent) v /= count;
    acc.grad_norm_sq /= count;
    acc.runmin_grad_norm_sq /= count;
    acc.staleness_mean /= count;
    acc.staleness_max /= count;
    acc.drift_mean /= count;
    acc.drift_max /= count;
    acc.realized_dmax /= static_cast<std::int64_t>(runs.size());
    acc.stale_drops /= static_cast<std::int64_t>(runs.size());
    acc.pads /= static_cast<std::int64_t>(runs.size());
    acc.in_flight /= static_cast<std::int64_t>(runs.size());
    acc.delivered /= static_cast<std::int64_t>(runs.size());
    acc.elapsed_ms /= count;
    for (auto& [name, value] : acc.extras) value /= count;
    mean.push_back(std::move(acc));
  }
  return mean;
}

}  // namespace zosim
