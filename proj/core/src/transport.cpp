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

#include "zosim/transport.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "zosim/errors.hpp"

namespace zosim {

Transport::Transport(const Graph* graph, TransportConfig cfg)
    : graph_(graph), cfg_(cfg) {
  if (graph_ == nullptr) {
    throw ConfigError("Transport: graph must not be null");
  }
  if (cfg_.d_comm < 1) {
    throw ConfigError("Transport: d_comm must be >= 1");
  }
}

void Transport::send(std::vector<Message> messages, std::int64_t t,
                     RandomStream& delay_stream) {
  for (Message& msg : messages) {
    if (msg.src < 0 || msg.src >= graph_->size() || msg.dst < 0 ||
        msg.dst >= graph_->size() || !graph_->edge(msg.src, msg.dst)) {
      throw ProtocolError("Transport::send: (" + std::to_string(msg.src) +
                          " -> " + std::to_string(msg.dst) +
                          ") is not an edge");
    }
    const int delay =
        cfg_.fixed_delay ? cfg_.d_comm : 1 + delay_stream.next_int(cfg_.d_comm);
    msg.send_time = t;
    msg.deliver_time = t + delay;
    queue_[msg.deliver_time].push_back(std::move(msg));
    ++sent_;
  }
}

std::vector<Message> Transport::deliver_due(std::int64_t t) {
  if (!queue_.empty() && queue_.begin()->first < t) {
    throw ProtocolError("Transport: overdue messages at tick " +
                        std::to_string(t));
  }
  std::vector<Message> due;
  auto it = queue_.find(t);
  if (it != queue_.end()) {
    due = std::move(it->second);
    queue_.erase(it);
    std::sort(due.begin(), due.end(), [](const Message& a, const Message& b) {
      return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    delivered_ += static_cast<std::int64_t>(due.size());
  }
  return due;
}

}  // namespace zosim
