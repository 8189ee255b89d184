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

#include "zosim/graph.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <string>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

// Distances from src along out-edges; -1 when unreachable.
std::vector<int> bfs(const Graph& g, int src, bool reversed) {
  std::vector<int> dist(g.size(), -1);
  std::deque<int> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    const auto& next =
        reversed ? g.in_neighbors(node) : g.out_neighbors(node);
    for (int n : next) {
      if (dist[n] < 0) {
        dist[n] = dist[node] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

}  // namespace

Graph::Graph(int num_nodes) : m_(num_nodes) {
  if (num_nodes < 1) {
    throw ConfigError("Graph: need at least one node");
  }
  adj_.assign(static_cast<std::size_t>(m_) * m_, 0);
  rebuild_neighbor_lists();
}

Graph Graph::full(int num_nodes) {
  Graph g(num_nodes);
  for (int i = 0; i < num_nodes; ++i) {
    for (int j = 0; j < num_nodes; ++j) {
      if (i != j) {
        g.adj_[static_cast<std::size_t>(i) * num_nodes + j] = 1;
      }
    }
  }
  g.rebuild_neighbor_lists();
  return g;
}

Graph Graph::block_overlap(int num_nodes, int kappa) {
  if (kappa < 2 || kappa % 2 != 0) {
    throw ConfigError("block_overlap: kappa must be even and >= 2");
  }
  if (kappa > num_nodes) {
    throw ConfigError("block_overlap: kappa must not exceed the agent count");
  }
  if (num_nodes % (kappa / 2) != 0) {
    throw ConfigError("block_overlap: agent count must be divisible by kappa/2");
  }
  Graph g(num_nodes);
  const int stride = kappa / 2;
  const int num_blocks = num_nodes / stride;
  for (int b = 0; b < num_blocks; ++b) {
    const int start = b * stride;
    for (int p = 0; p < kappa; ++p) {
      for (int q = 0; q < kappa; ++q) {
        if (p == q) continue;
        const int i = (start + p) % num_nodes;
        const int j = (start + q) % num_nodes;
        if (i != j) {
          g.adj_[static_cast<std::size_t>(i) * num_nodes + j] = 1;
        }
      }
    }
  }
  g.rebuild_neighbor_lists();
  return g;
}

Graph Graph::load_adjacency(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("load_adjacency: cannot open " + path.string());
  }
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<int> row;
    int value;
    while (ss >> value) {
      if (value != 0 && value != 1) {
        throw ConfigError("load_adjacency: entries must be 0 or 1 in " +
                          path.string());
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  const int m = static_cast<int>(rows.size());
  if (m == 0) {
    throw ConfigError("load_adjacency: empty matrix in " + path.string());
  }
  Graph g(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != m) {
      throw ConfigError("load_adjacency: row " + std::to_string(i) +
                        " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(m));
    }
    for (int j = 0; j < m; ++j) {
      if (i == j && rows[i][j] != 0) {
        throw ConfigError("load_adjacency: self-loop at row " +
                          std::to_string(i));
      }
      g.adj_[static_cast<std::size_t>(i) * m + j] =
          static_cast<std::uint8_t>(rows[i][j]);
    }
  }
  g.rebuild_neighbor_lists();
  return g;
}

void Graph::save_adjacency(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("save_adjacency: cannot write " + path.string());
  }
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) {
      out << (j == 0 ? "" : " ")
          << static_cast<int>(adj_[static_cast<std::size_t>(i) * m_ + j]);
    }
    out << "\n";
  }
}

bool Graph::edge(int i, int j) const {
  return adj_[static_cast<std::size_t>(i) * m_ + j] != 0;
}

void Graph::set_edge(int i, int j, bool present) {
  if (i == j) {
    throw ConfigError("Graph::set_edge: self-loops are not allowed");
  }
  adj_[static_cast<std::size_t>(i) * m_ + j] = present ? 1 : 0;
  rebuild_neighbor_lists();
}

const std::vector<int>& Graph::out_neighbors(int i) const { return out_[i]; }
const std::vector<int>& Graph::in_neighbors(int i) const { return in_[i]; }
int Graph::out_degree(int i) const { return static_cast<int>(out_[i].size()); }

int Graph::diameter() const {
  int longest = 0;
  for (int src = 0; src < m_; ++src) {
    const auto dist = bfs(*this, src, false);
    for (int d : dist) {
      if (d < 0) {
        throw ProtocolError("Graph::diameter: graph is not strongly connected");
      }
      longest = std::max(longest, d);
    }
  }
  return longest;
}

void Graph::rebuild_neighbor_lists() {
  out_.assign(m_, {});
  in_.assign(m_, {});
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) {
      if (adj_[static_cast<std::size_t>(i) * m_ + j]) {
        out_[i].push_back(j);
        in_[j].push_back(i);
      }
    }
  }
}

bool check_connected(const Graph& g) {
  if (g.size() == 1) {
    return true;
  }
  for (bool reversed : {false, true}) {
    std::vector<int> dist(g.size(), -1);
    std::deque<int> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      const auto& next =
          reversed ? g.in_neighbors(node) : g.out_neighbors(node);
      for (int n : next) {
        if (dist[n] < 0) {
          dist[n] = dist[node] + 1;
          queue.push_back(n);
        }
      }
    }
    for (int d : dist) {
      if (d < 0) return false;
    }
  }
  return true;
}

}  // namespace zosim
