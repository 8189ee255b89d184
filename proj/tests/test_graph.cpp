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

#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "zosim/errors.hpp"

using namespace zosim;

TEST_CASE("full graph links every ordered pair") {
  const Graph g = Graph::full(4);
  CHECK(g.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK_FALSE(g.edge(i, i));
    CHECK(g.out_degree(i) == 3);
    for (int j = 0; j < 4; ++j) {
      if (i != j) CHECK(g.edge(i, j));
    }
  }
  CHECK(g.diameter() == 1);
  CHECK(check_connected(g));
}

TEST_CASE("block overlap with kappa 2 is the directed ring both ways") {
  const Graph g = Graph::block_overlap(6, 2);
  for (int i = 0; i < 6; ++i) {
    CHECK(g.edge(i, (i + 1) % 6));
    CHECK(g.edge((i + 1) % 6, i));
    CHECK(g.out_degree(i) == 2);
  }
  CHECK(g.diameter() == 3);
}

TEST_CASE("block overlap widens with kappa") {
  const Graph g = Graph::block_overlap(6, 4);
  // Blocks {0..3}, {2..5}, {4,5,0,1}: node 0 reaches 1, 2, 3 and 4, 5.
  CHECK(g.out_degree(0) == 5);
  CHECK(g.diameter() == 1);

  const Graph h = Graph::block_overlap(8, 4);
  CHECK(h.out_degree(0) == 5);  // {1,2,3} from its block, {6,7} from wrap
  CHECK_FALSE(h.edge(0, 4));
  CHECK(h.diameter() == 2);
}

TEST_CASE("block overlap rejects incompatible shapes") {
  CHECK_THROWS_AS(Graph::block_overlap(6, 3), ConfigError);   // odd kappa
  CHECK_THROWS_AS(Graph::block_overlap(6, 0), ConfigError);
  CHECK_THROWS_AS(Graph::block_overlap(6, 8), ConfigError);   // kappa > m
  CHECK_THROWS_AS(Graph::block_overlap(7, 4), ConfigError);   // 7 % 2 != 0
}

TEST_CASE("neighbor lists mirror the adjacency matrix") {
  Graph g(3);
  g.set_edge(0, 1, true);
  g.set_edge(1, 2, true);
  CHECK(g.out_neighbors(0) == std::vector<int>{1});
  CHECK(g.in_neighbors(2) == std::vector<int>{1});
  CHECK(g.in_neighbors(0).empty());
  CHECK_FALSE(check_connected(g));
  CHECK_THROWS_AS(g.diameter(), ProtocolError);  // 2 cannot reach 0

  g.set_edge(2, 0, true);
  CHECK(check_connected(g));
  CHECK(g.diameter() == 2);
}

TEST_CASE("adjacency files round-trip") {
  const Graph g = Graph::block_overlap(6, 2);
  const auto path = std::filesystem::temp_directory_path() /
                    "zosim_graph_roundtrip.txt";
  g.save_adjacency(path);
  const Graph back = Graph::load_adjacency(path);
  REQUIRE(back.size() == g.size());
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      CHECK(back.edge(i, j) == g.edge(i, j));
    }
  }
  std::filesystem::remove(path);
}
