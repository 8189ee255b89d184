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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "zosim/agent.hpp"
#include "zosim/diagnostics.hpp"
#include "zosim/graph.hpp"
#include "zosim/metrics.hpp"
#include "zosim/problem.hpp"
#include "zosim/smoothing.hpp"
#include "zosim/transport.hpp"

namespace zosim {

/// kDirect: an agent that queries broadcasts that one record to the agents
/// whose costs its parameters enter. kGossip: agents relay their whole
/// memory to graph out-neighbors on transmit ticks, so queries reach agents
/// that are not dependency neighbors by multi-hop forwarding.
enum class CommMode { kDirect, kGossip };

/// Per-role explicit activation ticks, one sorted list per agent. A role
/// with an explicit schedule ignores its probability and the forcing rule.
using ExplicitSchedule = std::vector<std::vector<std::int64_t>>;

// Per-agent activity draws. Each role fires independently with its
// probability, but never goes silent longer than the window: an agent whose
// last activation in a role lies `window` or more ticks in the past is
// forced active. window = 1 therefore makes every tick fully synchronous.
struct ActivityConfig {
  double p_query = 1.0;
  double p_update = 1.0;
  double p_transmit = 1.0;
  int window = 1;
  std::optional<ExplicitSchedule> query_schedule;
  std::optional<ExplicitSchedule> update_schedule;
  std::optional<ExplicitSchedule> transmit_schedule;
};

struct TickActivity {
  bool query = false;
  bool update = false;
  bool transmit = false;
};

class ActivitySampler {
 public:
  ActivitySampler(const ActivityConfig& cfg, int num_agents);

  /// Draws one TickActivity per agent for tick t. Consumes exactly three
  /// uniforms from each agent's stream regardless of the outcome, so the
  /// other streams never shift when probabilities or schedules change.
  std::vector<TickActivity> sample(std::int64_t t,
                                   std::vector<RandomStream>& streams);

  const ActivityConfig& config() const { return cfg_; }

 private:
  ActivityConfig cfg_;
  std::vector<std::int64_t> last_query_;
  std::vector<std::int64_t> last_update_;
  std::vector<std::int64_t> last_transmit_;
};

/// Worst-case age of the freshest stored record from any dependency source,
/// counted at the tick it is read. Direct mode: one activity window plus one
/// delivery. Gossip mode: a window plus a delivery per relay hop bounded via
/// the graph diameter, plus the source's own refresh interval.
int staleness_bound(CommMode mode, int window, int d_comm, int graph_diameter);

struct SimulationOptions {
  CommMode comm_mode = CommMode::kDirect;
  ActivityConfig activity;
  SmoothingConfig smoothing;
  StepsizeSchedule stepsize;
  TransportConfig transport;
  std::uint64_t master_seed = 1;
  int metrics_period = 1;      // record a row every this many ticks
  bool track_gradient = true;  // evaluate the closed-form gradient if any
  bool track_extras = true;    // call the problem's extra_metrics
  double coherence_ms = 25.0;  // modeled wall time of one oracle call
  // Without a closed form, the gradient norm is estimated by Monte-Carlo
  // smoothed differences on the evaluation stream, every
  // mc_gradient_period ticks (0 disables the estimate).
  int mc_gradient_period = 100;
  int mc_gradient_samples = 200;
};

struct InvariantCounters {
  std::int64_t delay_violations = 0;      // delivered outside [1, d_comm]
  std::int64_t staleness_violations = 0;  // stored record older than bound
  std::int64_t ordering_violations = 0;   // per-source timestamp regressions
};

// One experiment replicate: m agents sharing a stochastic cost, querying and
// updating on their own random clocks, exchanging scalar queries through a
// delaying transport. All randomness derives from master_seed, so identical
// options give bit-identical trajectories.
//
// Tick t runs in fixed phases: activity draws; oracle evaluation of the
// unperturbed and the jointly perturbed point on a fresh minibatch; querying
// agents store their own scalar query; broadcasts are queued; due messages
// are delivered and ingested; every agent draws its perturbation for t + 1;
// updating agents step along their reconstructed direction; metrics are
// recorded. Messages queued at t are never delivered before t + 1.
class Simulation {
 public:
  Simulation(std::shared_ptr<Problem> problem, SimulationOptions options,
             const Graph* gossip_graph = nullptr);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void tick();

  /// Runs `ticks` more ticks and returns the rows recorded during them.
  std::vector<MetricsRow> run(std::int64_t ticks);

  std::int64_t now() const { return t_; }
  int agent_count() const { return m_; }
  Vector joint_theta() const;
  const AgentState& agent(int i) const;
  int configured_staleness_bound() const { return dmax_; }
  std::int64_t realized_staleness_max() const { return realized_dmax_; }
  const InvariantCounters& invariants() const { return invariants_; }
  const Problem& problem() const { return *problem_; }
  const Graph& comm_graph() const { return comm_graph_; }
  const std::vector<MetricsRow>& rows() const { return rows_; }

  /// Hands a crafted record straight to an agent's memory, for tests.
  void inject_record(int dst, const QueryRecord& record);

 private:
  void ingest(int dst, std::span<const QueryRecord> records);
  void scan_memories();
  double mc_gradient_norm_sq(const Vector& joint);
  void record_metrics();

  std::shared_ptr<Problem> problem_;
  SimulationOptions opts_;
  int m_;
  std::vector<int> block_offsets_;
  Graph comm_graph_;
  int dmax_;
  std::vector<AgentState> agents_;
  std::vector<RandomStream> perturb_streams_;
  std::vector<RandomStream> schedule_streams_;
  RandomStream sample_stream_;
  RandomStream delay_stream_;
  RandomStream eval_stream_;
  Transport transport_;
  ActivitySampler sampler_;
  std::int64_t t_ = 0;
  // Joint parameters used by past ticks' evaluations; front() is the oldest,
  // retained long enough to resolve any stored record's timestamp.
  std::deque<Vector> theta_history_;
  std::int64_t theta_history_base_ = 0;
  double runmin_grad_norm_sq_;
  std::int64_t realized_dmax_ = 0;
  double staleness_mean_now_ = 0.0;
  double staleness_max_now_ = 0.0;
  double drift_mean_now_ = 0.0;
  double drift_max_now_ = 0.0;
  InvariantCounters invariants_;
  std::vector<MetricsRow> rows_;
};

}  // namespace zosim
