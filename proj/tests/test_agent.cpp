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

#include <limits>
#include <vector>

#include "doctest.h"
#include "zosim/errors.hpp"

using namespace zosim;

TEST_CASE("memory keeps the freshest record per source") {
  QueryMemory mem;
  CHECK(mem.ingest(QueryRecord{0, 5, 1.0}) == 0);
  CHECK(mem.size() == 1);

  // Older and equal timestamps are dropped and counted.
  CHECK(mem.ingest(QueryRecord{0, 3, 2.0}) == 1);
  CHECK(mem.ingest(QueryRecord{0, 5, 2.0}) == 1);
  CHECK(mem.find(0)->value == 1.0);
  CHECK(mem.stale_drops() == 2);

  CHECK(mem.ingest(QueryRecord{0, 7, 3.0}) == 0);
  CHECK(mem.find(0)->timestamp == 7);
  CHECK(mem.find(0)->value == 3.0);
  CHECK(mem.size() == 1);
}

TEST_CASE("memory snapshot is ordered by source id") {
  QueryMemory mem;
  mem.ingest(QueryRecord{4, 1, 0.4});
  mem.ingest(QueryRecord{0, 2, 0.0});
  mem.ingest(QueryRecord{2, 3, 0.2});
  const auto snap = mem.snapshot();
  REQUIRE(snap.size() == 3);
  CHECK(snap[0].source_agent == 0);
  CHECK(snap[1].source_agent == 2);
  CHECK(snap[2].source_agent == 4);
  CHECK(mem.find(3) == nullptr);
}

TEST_CASE("memory rejects corrupt records") {
  QueryMemory mem;
  CHECK_THROWS_AS(mem.ingest(QueryRecord{0, -1, 1.0}), ProtocolError);
  CHECK_THROWS_AS(
      mem.ingest(QueryRecord{0, 1, std::numeric_limits<double>::infinity()}),
      NumericError);
}

TEST_CASE("batch ingest reports the total number of drops") {
  QueryMemory mem;
  const std::vector<QueryRecord> batch = {
      {0, 4, 1.0}, {1, 2, 2.0}, {0, 3, 9.0}, {1, 2, 9.0}};
  CHECK(mem.ingest(batch) == 2);
  CHECK(mem.find(0)->timestamp == 4);
  CHECK(mem.find(1)->value == 2.0);
}

TEST_CASE("perturbation buffer evicts oldest and reports its window") {
  PerturbationBuffer buf(2);
  CHECK(buf.size() == 0);
  buf.push(0, Vector::Constant(1, 10.0));
  buf.push(1, Vector::Constant(1, 11.0));
  CHECK(buf.oldest_timestamp() == 0);
  CHECK(buf.newest_timestamp() == 1);

  buf.push(2, Vector::Constant(1, 12.0));
  CHECK(buf.size() == 2);
  CHECK(buf.oldest_timestamp() == 1);
  CHECK_FALSE(buf.contains(0));
  CHECK(buf.at(1)(0) == 11.0);
  CHECK(buf.at(2)(0) == 12.0);
  CHECK_THROWS_AS(buf.at(0), BufferUnderrunError);
  CHECK_THROWS_AS(buf.at(3), BufferUnderrunError);
}

TEST_CASE("perturbation buffer demands contiguous timestamps") {
  PerturbationBuffer buf(4);
  buf.push(5, Vector::Zero(2));
  CHECK_THROWS_AS(buf.push(7, Vector::Zero(2)), ProtocolError);
  CHECK_THROWS_AS(buf.push(5, Vector::Zero(2)), ProtocolError);
  buf.push(6, Vector::Zero(2));
  CHECK(buf.newest_timestamp() == 6);
  CHECK_THROWS_AS(PerturbationBuffer(0), ConfigError);
}

namespace {

AgentState make_agent() {
  // Two rx sources feed agent 0; its own block is 2-dimensional.
  AgentState a(0, Vector::Zero(2), 4, {0, 1}, {0, 1});
  Vector u0(2), u1(2);
  u0 << 1.0, 0.0;
  u1 << 0.0, 1.0;
  a.perturbations.push(0, u0);
  a.perturbations.push(1, u1);
  return a;
}

}  // namespace

TEST_CASE("update direction pairs each record with its own perturbation") {
  AgentState a = make_agent();
  a.memory.ingest(QueryRecord{0, 1, 2.0});
  a.memory.ingest(QueryRecord{1, 0, -1.0});

  // 2.0 * u^1 + (-1.0) * u^0 = (-1, 2).
  const Vector dir = build_update_direction(a, 1, true);
  CHECK(dir(0) == doctest::Approx(-1.0));
  CHECK(dir(1) == doctest::Approx(2.0));

  const Vector idle = build_update_direction(a, 1, false);
  CHECK(idle.isZero(0.0));
}

TEST_CASE("missing sources contribute nothing to the direction") {
  AgentState a = make_agent();
  a.memory.ingest(QueryRecord{1, 0, 3.0});
  const Vector dir = build_update_direction(a, 1, true);
  CHECK(dir(0) == doctest::Approx(3.0));
  CHECK(dir(1) == doctest::Approx(0.0));
}

TEST_CASE("records older than the buffer abort instead of corrupting") {
  AgentState a(0, Vector::Zero(1), 1, {1}, {});
  a.perturbations.push(0, Vector::Constant(1, 1.0));
  a.perturbations.push(1, Vector::Constant(1, 2.0));  // evicts t = 0
  a.memory.ingest(QueryRecord{1, 0, 1.0});
  CHECK_THROWS_AS(build_update_direction(a, 1, true), BufferUnderrunError);

  a.memory.ingest(QueryRecord{1, 2, 1.0});
  CHECK_THROWS_AS(build_update_direction(a, 1, true), ProtocolError);
}

TEST_CASE("apply_update adds gamma times the direction") {
  AgentState a = make_agent();
  Vector dir(2);
  dir << 1.0, -2.0;
  apply_update(a, 0.5, dir);
  CHECK(a.theta(0) == doctest::Approx(0.5));
  CHECK(a.theta(1) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(apply_update(a, 0.0, dir), ConfigError);
  CHECK_THROWS_AS(apply_update(a, 0.5, Vector::Zero(3)), DimensionError);
  Vector inf_dir = Vector::Constant(2, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(apply_update(a, 0.5, inf_dir), NumericError);
}
