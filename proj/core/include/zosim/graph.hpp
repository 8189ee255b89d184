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
#include <vector>

namespace zosim {

// Directed communication graph over agent ids 0..m-1, dense 0/1 adjacency.
// edge(i, j) means i may send to j. No self-loops.
class Graph {
 public:
  explicit Graph(int num_nodes);

  /// All ordered pairs (i, j), i != j.
  static Graph full(int num_nodes);

  /// Undirected overlap-block topology: blocks of kappa consecutive ids
  /// start every kappa/2 ids and wrap around; ids sharing a block are
  /// mutually adjacent. Requires kappa even, 2 <= kappa <= m, and m
  /// divisible by kappa/2.
  static Graph block_overlap(int num_nodes, int kappa);

  /// Plain-text 0/1 matrix, one space-separated row per agent.
  static Graph load_adjacency(const std::filesystem::path& path);
  void save_adjacency(const std::filesystem::path& path) const;

  int size() const { return m_; }
  bool edge(int i, int j) const;
  void set_edge(int i, int j, bool present);
  const std::vector<int>& out_neighbors(int i) const;
  const std::vector<int>& in_neighbors(int i) const;
  int out_degree(int i) const;

  /// Longest shortest directed path; throws ProtocolError if unreachable
  /// pairs exist.
  int diameter() const;

 private:
  void rebuild_neighbor_lists();

  int m_;
  std::vector<std::uint8_t> adj_;  // row-major m x m
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// True when every node reaches every other along directed edges.
bool check_connected(const Graph& g);

}  // namespace zosim
