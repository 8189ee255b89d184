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
#include <deque>
#include <map>
#include <span>
#include <vector>

#include "zosim/random.hpp"

namespace zosim {

/// One scalar query as it travels the network: who measured it, at which
/// tick, and the measured value.
struct QueryRecord {
  int source_agent = 0;
  std::int64_t timestamp = 0;
  double value = 0.0;
};

// Per-source freshest-wins store. An incoming record replaces the stored one
// only when strictly newer; ties and older arrivals are dropped and counted.
// Stored timestamps therefore never decrease.
class QueryMemory {
 public:
  /// Returns the number of dropped (stale or tied) records.
  int ingest(const QueryRecord& record);
  int ingest(std::span<const QueryRecord> records);

  const QueryRecord* find(int source_agent) const;

  /// All records ordered by source id.
  std::vector<QueryRecord> snapshot() const;

  std::size_t size() const { return records_.size(); }
  std::int64_t stale_drops() const { return stale_drops_; }
  const std::map<int, QueryRecord>& records() const { return records_; }

 private:
  std::map<int, QueryRecord> records_;
  std::int64_t stale_drops_ = 0;
};

// Rolling window of own perturbation vectors keyed by timestamp. Pushes must
// be contiguous in time; once full, the strictly oldest entry is evicted.
class PerturbationBuffer {
 public:
  explicit PerturbationBuffer(int capacity);

  void push(std::int64_t t, Vector u);

  /// Throws BufferUnderrunError when t is outside the retained window.
  const Vector& at(std::int64_t t) const;

  bool contains(std::int64_t t) const;
  std::size_t size() const { return entries_.size(); }
  int capacity() const { return capacity_; }
  std::int64_t newest_timestamp() const;
  std::int64_t oldest_timestamp() const;

 private:
  int capacity_;
  std::int64_t base_t_ = 0;  // timestamp of entries_.front()
  std::deque<Vector> entries_;
};

struct AgentState {
  AgentState(int id, Vector theta0, int buffer_capacity,
             std::vector<int> rx_neighbors, std::vector<int> tx_neighbors);

  int id;
  Vector theta;
  QueryMemory memory;
  PerturbationBuffer perturbations;
  std::vector<int> rx_neighbors;  // sources whose queries enter the update
  std::vector<int> tx_neighbors;  // destinations of own queries (direct mode)
};

/// Update direction at tick t: the sum over stored in-neighbor records of
/// record value times the agent's own perturbation at the record timestamp.
/// Sources without a record contribute nothing. Returns zero when
/// is_update_tick is false. A referenced perturbation that has been evicted
/// raises BufferUnderrunError.
Vector build_update_direction(const AgentState& state, std::int64_t t,
                              bool is_update_tick);

/// theta += gamma * direction; gamma must be positive and the result finite.
void apply_update(AgentState& state, double gamma, const Vector& direction);

}  // namespace zosim
