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

#include "zosim/agent.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "zosim/errors.hpp"

namespace zosim {

int QueryMemory::ingest(const QueryRecord& record) {
  if (record.timestamp < 0) {
    throw ProtocolError("QueryMemory: negative timestamp from source " +
                        std::to_string(record.source_agent));
  }
  if (!std::isfinite(record.value)) {
    throw NumericError("QueryMemory: non-finite query value from source " +
                       std::to_string(record.source_agent));
  }
  auto it = records_.find(record.source_agent);
  if (it == records_.end()) {
    records_.emplace(record.source_agent, record);
    return 0;
  }
  if (record.timestamp > it->second.timestamp) {
    it->second = record;
    return 0;
  }
  ++stale_drops_;
  return 1;
}

int QueryMemory::ingest(std::span<const QueryRecord> records) {
  int dropped = 0;
  for (const auto& r : records) {
    dropped += ingest(r);
  }
  return dropped;
}

const QueryRecord* QueryMemory::find(int source_agent) const {
  auto it = records_.find(source_agent);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<QueryRecord> QueryMemory::snapshot() const {
  std::vector<QueryRecord> out;
  out.reserve(records_.size());
  for (const auto& [src, rec] : records_) {
    out.push_back(rec);
  }
  return out;
}

PerturbationBuffer::PerturbationBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) {
    throw ConfigError("PerturbationBuffer: capacity must be >= 1");
  }
}

void PerturbationBuffer::push(std::int64_t t, Vector u) {
  if (!entries_.empty() && t != base_t_ + static_cast<std::int64_t>(entries_.size())) {
    throw ProtocolError("PerturbationBuffer: non-contiguous push at t=" +
                        std::to_string(t));
  }
  if (entries_.empty()) {
    base_t_ = t;
  }
  entries_.push_back(std::move(u));
  while (entries_.size() > static_cast<std::size_t>(capacity_)) {
    entries_.pop_front();
    ++base_t_;
  }
}

const Vector& PerturbationBuffer::at(std::int64_t t) const {
  if (!contains(t)) {
    throw BufferUnderrunError(
        "PerturbationBuffer: timestamp " + std::to_string(t) +
        " outside retained window [" + std::to_string(base_t_) + ", " +
        std::to_string(base_t_ + static_cast<std::int64_t>(entries_.size()) - 1) +
        "]");
  }
  return entries_[static_cast<std::size_t>(t - base_t_)];
}

bool PerturbationBuffer::contains(std::int64_t t) const {
  return !entries_.empty() && t >= base_t_ &&
         t < base_t_ + static_cast<std::int64_t>(entries_.size());
}

std::int64_t PerturbationBuffer::newest_timestamp() const {
  if (entries_.empty()) {
    throw ProtocolError("PerturbationBuffer: empty");
  }
  return base_t_ + static_cast<std::int64_t>(entries_.size()) - 1;
}

std::int64_t PerturbationBuffer::oldest_timestamp() const {
  if (entries_.empty()) {
    throw ProtocolError("PerturbationBuffer: empty");
  }
  return base_t_;
}

AgentState::AgentState(int id, Vector theta0, int buffer_capacity,
                       std::vector<int> rx, std::vector<int> tx)
    : id(id),
      theta(std::move(theta0)),
      perturbations(buffer_capacity),
      rx_neighbors(std::move(rx)),
      tx_neighbors(std::move(tx)) {}

Vector build_update_direction(const AgentState& state, std::int64_t t,
                              bool is_update_tick) {
  Vector direction = Vector::Zero(state.theta.size());
  if (!is_update_tick) {
    return direction;
  }
  for (int source : state.rx_neighbors) {
    const QueryRecord* rec = state.memory.find(source);
    if (rec == nullptr) {
      continue;  // not heard from yet: contributes nothing
    }
    if (rec->timestamp > t) {
      throw ProtocolError("build_update_direction: agent " +
                          std::to_string(state.id) + " holds a record from " +
                          std::to_string(source) + " with future timestamp");
    }
    direction += rec->value * state.perturbations.at(rec->timestamp);
  }
  return direction;
}

void apply_update(AgentState& state, double gamma, const Vector& direction) {
  if (gamma <= 0.0) {
    throw ConfigError("apply_update: stepsize must be positive");
  }
  if (direction.size() != state.theta.size()) {
    throw DimensionError("apply_update: direction dimension mismatch");
  }
  state.theta += gamma * direction;
  if (!state.theta.allFinite()) {
    throw NumericError("apply_update: non-finite parameters at agent " +
                       std::to_string(state.id));
  }
}

}  // namespace zosim
