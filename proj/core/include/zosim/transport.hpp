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
#include <map>
#include <vector>

#include "zosim/agent.hpp"
#include "zosim/graph.hpp"

namespace zosim {

struct Message {
  int src = 0;
  int dst = 0;
  std::vector<QueryRecord> payload;
  std::int64_t send_time = 0;
  std::int64_t deliver_time = 0;
};

struct TransportConfig {
  int d_comm = 1;            // delay bound in ticks, >= 1
  bool fixed_delay = false;  // true: every hop takes exactly d_comm ticks
};

// In-flight message store with per-message delays. Random delays are drawn
// uniformly from {1, ..., d_comm} in submission order, so a run is
// reproducible from the delay stream alone. Messages are handed out exactly
// once, at their deliver tick, sorted by (src, dst).
class Transport {
 public:
  Transport(const Graph* graph, TransportConfig cfg);

  /// Assigns delays and queues the messages; every (src, dst) must be a
  /// graph edge. send_time is taken from `t`.
  void send(std::vector<Message> messages, std::int64_t t,
            RandomStream& delay_stream);

  /// All messages due exactly at tick t, in (src, dst) order. Throws
  /// ProtocolError if an overdue message is still queued.
  std::vector<Message> deliver_due(std::int64_t t);

  std::int64_t sent_count() const { return sent_; }
  std::int64_t delivered_count() const { return delivered_; }
  std::int64_t in_flight() const { return sent_ - delivered_; }

 private:
  const Graph* graph_;
  TransportConfig cfg_;
  std::map<std::int64_t, std::vector<Message>> queue_;  // keyed by deliver_time
  std::int64_t sent_ = 0;
  std::int64_t delivered_ = 0;
};

}  // namespace zosim
