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

#include "zosim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

void validate_schedule(const std::optional<ExplicitSchedule>& schedule,
                       int num_agents, const char* role) {
  if (!schedule) return;
  if (static_cast<int>(schedule->size()) != num_agents) {
    throw ConfigError(std::string("ActivitySampler: ") + role +
                      " schedule must list every agent");
  }
  for (const auto& ticks : *schedule) {
    if (!std::is_sorted(ticks.begin(), ticks.end())) {
      throw ConfigError(std::string("ActivitySampler: ") + role +
                        " schedule ticks must be sorted");
    }
  }
}

bool scheduled(const ExplicitSchedule& schedule, int agent, std::int64_t t) {
  const auto& ticks = schedule[agent];
  return std::binary_search(ticks.begin(), ticks.end(), t);
}

Graph dependency_graph(const Problem& problem) {
  const int m = problem.agent_count();
  Graph g(m);
  for (int i = 0; i < m; ++i) {
    for (int dst : problem.tx_neighbor_sets()[i]) {
      if (dst != i) g.set_edge(i, dst, true);
    }
  }
  return g;
}

Graph make_comm_graph(const Problem& problem, CommMode mode,
                      const Graph* gossip_graph) {
  if (mode == CommMode::kDirect) {
    return dependency_graph(problem);
  }
  if (gossip_graph == nullptr) {
    throw ConfigError("Simulation: gossip mode needs a graph");
  }
  if (gossip_graph->size() != problem.agent_count()) {
    throw ConfigError("Simulation: graph size does not match agent count");
  }
  if (!check_connected(*gossip_graph)) {
    throw ConfigError("Simulation: gossip graph must be strongly connected");
  }
  return *gossip_graph;
}

}  // namespace

ActivitySampler::ActivitySampler(const ActivityConfig& cfg, int num_agents)
    : cfg_(cfg),
      last_query_(num_agents, -1),
      last_update_(num_agents, -1),
      last_transmit_(num_agents, -1) {
  if (num_agents < 1) {
    throw ConfigError("ActivitySampler: need at least one agent");
  }
  for (double p : {cfg_.p_query, cfg_.p_update, cfg_.p_transmit}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("ActivitySampler: probabilities must lie in [0, 1]");
    }
  }
  if (cfg_.window < 1) {
    throw ConfigError("ActivitySampler: window must be >= 1");
  }
  validate_schedule(cfg_.query_schedule, num_agents, "query");
  validate_schedule(cfg_.update_schedule, num_agents, "update");
  validate_schedule(cfg_.transmit_schedule, num_agents, "transmit");
}

std::vector<TickActivity> ActivitySampler::sample(
    std::int64_t t, std::vector<RandomStream>& streams) {
  if (streams.size() != last_query_.size()) {
    throw ProtocolError("ActivitySampler: one stream per agent required");
  }
  std::vector<TickActivity> out(streams.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    TickActivity a;
    a.query = streams[i].next_bernoulli(cfg_.p_query);
    a.update = streams[i].next_bernoulli(cfg_.p_update);
    a.transmit = streams[i].next_bernoulli(cfg_.p_transmit);
    const int agent = static_cast<int>(i);
    if (cfg_.query_schedule) {
      a.query = scheduled(*cfg_.query_schedule, agent, t);
    } else if (t - last_query_[i] >= cfg_.window) {
      a.query = true;
    }
    if (cfg_.update_schedule) {
      a.update = scheduled(*cfg_.update_schedule, agent, t);
    } else if (t - last_update_[i] >= cfg_.window) {
      a.update = true;
    }
    if (cfg_.transmit_schedule) {
      a.transmit = scheduled(*cfg_.transmit_schedule, agent, t);
    } else if (t - last_transmit_[i] >= cfg_.window) {
      a.transmit = true;
    }
    if (a.query) last_query_[i] = t;
    if (a.update) last_update_[i] = t;
    if (a.transmit) last_transmit_[i] = t;
    out[i] = a;
  }
  return out;
}

int staleness_bound(CommMode mode, int window, int d_comm,
                    int graph_diameter) {
  if (window < 1 || d_comm < 1) {
    throw ConfigError("staleness_bound: window and d_comm must be >= 1");
  }
  if (mode == CommMode::kDirect) {
    return window + d_comm;
  }
  if (graph_diameter < 1) {
    throw ConfigError("staleness_bound: gossip needs a positive diameter");
  }
  return (window + d_comm) * (graph_diameter + 1);
}

Simulation::Simulation(std::shared_ptr<Problem> problem,
                       SimulationOptions options, const Graph* gossip_graph)
    : problem_(std::move(problem)),
      opts_(std::move(options)),
      m_(problem_->agent_count()),
      block_offsets_(problem_->block_offsets()),
      comm_graph_(make_comm_graph(*problem_, opts_.comm_mode, gossip_graph)),
      dmax_(staleness_bound(opts_.comm_mode, opts_.activity.window,
                            opts_.transport.d_comm,
                            opts_.comm_mode == CommMode::kGossip
                                ? comm_graph_.diameter()
                                : 1)),
      sample_stream_(opts_.master_seed, m_, StreamPurpose::kSample),
      delay_stream_(opts_.master_seed, m_, StreamPurpose::kDelay),
      eval_stream_(opts_.master_seed, m_ + 1, StreamPurpose::kSample),
      transport_(&comm_graph_, opts_.transport),
      sampler_(opts_.activity, m_),
      runmin_grad_norm_sq_(std::numeric_limits<double>::quiet_NaN()) {
  if (!(opts_.smoothing.mu > 0.0)) {
    throw ConfigError("Simulation: mu must be positive");
  }
  if (opts_.smoothing.batch_size < 1) {
    throw ConfigError("Simulation: batch_size must be >= 1");
  }
  if (opts_.metrics_period < 1) {
    throw ConfigError("Simulation: metrics_period must be >= 1");
  }
  // The perturbation for t + 1 is drawn before the updates at t consume
  // records as old as t - dmax, so the buffer spans dmax + 2 ticks.
  const int capacity = dmax_ + 2;
  agents_.reserve(m_);
  for (int i = 0; i < m_; ++i) {
    RandomStream init_stream(opts_.master_seed, i, StreamPurpose::kInit);
    Vector theta0 = problem_->initial_theta(i, init_stream);
    if (theta0.size() != problem_->block_dims()[i]) {
      throw DimensionError("Simulation: initial_theta size mismatch");
    }
    agents_.emplace_back(i, std::move(theta0), capacity,
                         problem_->rx_neighbor_sets()[i],
                         problem_->tx_neighbor_sets()[i]);
    perturb_streams_.emplace_back(opts_.master_seed, i,
                                  StreamPurpose::kPerturbation);
    schedule_streams_.emplace_back(opts_.master_seed, i,
                                   StreamPurpose::kSchedule);
  }
  for (int i = 0; i < m_; ++i) {
    agents_[i].perturbations.push(
        0, gaussian_vector(perturb_streams_[i], problem_->block_dims()[i]));
  }
}

Vector Simulation::joint_theta() const {
  Vector joint(problem_->total_dim());
  for (int i = 0; i < m_; ++i) {
    joint.segment(block_offsets_[i], agents_[i].theta.size()) =
        agents_[i].theta;
  }
  return joint;
}

const AgentState& Simulation::agent(int i) const {
  if (i < 0 || i >= m_) {
    throw ConfigError("Simulation::agent: index out of range");
  }
  return agents_[i];
}

void Simulation::inject_record(int dst, const QueryRecord& record) {
  if (dst < 0 || dst >= m_) {
    throw ConfigError("Simulation::inject_record: no such agent");
  }
  ingest(dst, std::span<const QueryRecord>(&record, 1));
}

void Simulation::ingest(int dst, std::span<const QueryRecord> records) {
  AgentState& a = agents_[dst];
  for (const QueryRecord& rec : records) {
    const QueryRecord* prev = a.memory.find(rec.source_agent);
    const std::int64_t prev_timestamp = prev ? prev->timestamp : -1;
    a.memory.ingest(rec);
    const QueryRecord* now = a.memory.find(rec.source_agent);
    if (now == nullptr || now->timestamp < prev_timestamp) {
      ++invariants_.ordering_violations;
    }
  }
}

void Simulation::scan_memories() {
  double age_sum = 0.0, age_max = 0.0;
  double drift_sum = 0.0, drift_max = 0.0;
  std::int64_t count = 0;
  std::int64_t drift_count = 0;
  const Vector& theta_now = theta_history_.back();
  for (const AgentState& a : agents_) {
    for (const auto& [source, rec] : a.memory.records()) {
      const std::int64_t age = t_ - rec.timestamp;
      realized_dmax_ = std::max(realized_dmax_, age);
      age_sum += static_cast<double>(age);
      age_max = std::max(age_max, static_cast<double>(age));
      ++count;
      if (age < 0 || age > dmax_) {
        // Counted, not fatal: acceptance traces assert this stays zero.
        ++invariants_.staleness_violations;
        continue;
      }
      const std::int64_t slot = rec.timestamp - theta_history_base_;
      if (slot < 0 ||
          slot >= static_cast<std::int64_t>(theta_history_.size())) {
        throw ProtocolError(
            "Simulation: record timestamp " + std::to_string(rec.timestamp) +
            " outside the retained parameter window at tick " +
            std::to_string(t_));
      }
      const double drift =
          (theta_now - theta_history_[static_cast<std::size_t>(slot)])
              .squaredNorm();
      drift_sum += drift;
      drift_max = std::max(drift_max, drift);
      ++drift_count;
    }
  }
  staleness_mean_now_ = count > 0 ? age_sum / static_cast<double>(count) : 0.0;
  staleness_max_now_ = age_max;
  drift_mean_now_ =
      drift_count > 0 ? drift_sum / static_cast<double>(drift_count) : 0.0;
  drift_max_now_ = drift_max;
}

double Simulation::mc_gradient_norm_sq(const Vector& joint) {
  // Smoothed-difference estimate of the averaged objective's gradient,
  // sharing each sample between the two evaluations. This is a simulator
  // diagnostic; it never feeds the training streams.
  const double mu = opts_.smoothing.mu;
  const int n = static_cast<int>(joint.size());
  Vector estimate = Vector::Zero(n);
  for (int k = 0; k < opts_.mc_gradient_samples; ++k) {
    const Vector u = gaussian_vector(eval_stream_, n);
    const SamplePtr sample = problem_->draw_eval_sample(eval_stream_);
    const double at_base = problem_->cost_all(joint, *sample).mean();
    const double at_shifted =
        problem_->cost_all(joint + mu * u, *sample).mean();
    estimate += ((at_shifted - at_base) / mu) * u;
  }
  estimate /= static_cast<double>(opts_.mc_gradient_samples);
  return estimate.squaredNorm();
}

void Simulation::record_metrics() {
  MetricsRow row;
  row.t = t_;
  row.gamma = stepsize(t_, opts_.stepsize);
  const Vector joint = joint_theta();
  const auto locals = problem_->local_objectives_closed_form(joint);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.objective_per_agent.assign(static_cast<std::size_t>(m_), nan);
  row.objective_mean = nan;
  if (locals) {
    double sum = 0.0;
    for (int i = 0; i < m_; ++i) {
      row.objective_per_agent[static_cast<std::size_t>(i)] = (*locals)(i);
      sum += (*locals)(i);
    }
    row.objective_mean = sum / static_cast<double>(m_);
  }
  row.grad_norm_sq = nan;
  if (opts_.track_gradient) {
    if (const auto grad = problem_->gradient_closed_form(joint)) {
      row.grad_norm_sq = grad->squaredNorm();
    } else if (opts_.mc_gradient_period > 0 && opts_.mc_gradient_samples > 0 &&
               (t_ + 1) % opts_.mc_gradient_period == 0) {
      row.grad_norm_sq = mc_gradient_norm_sq(joint);
    }
    if (!std::isnan(row.grad_norm_sq)) {
      runmin_grad_norm_sq_ = std::isnan(runmin_grad_norm_sq_)
                                 ? row.grad_norm_sq
                                 : std::min(runmin_grad_norm_sq_,
                                            row.grad_norm_sq);
    }
  }
  row.runmin_grad_norm_sq = runmin_grad_norm_sq_;
  row.staleness_mean = staleness_mean_now_;
  row.staleness_max = staleness_max_now_;
  row.drift_mean = drift_mean_now_;
  row.drift_max = drift_max_now_;
  row.realized_dmax = realized_dmax_;
  std::int64_t drops = 0;
  for (const AgentState& a : agents_) drops += a.memory.stale_drops();
  row.stale_drops = drops;
  row.pads = problem_->pad_count();
  row.in_flight = transport_.in_flight();
  row.delivered = transport_.delivered_count();
  row.elapsed_ms = wall_time_ms(t_ + 1, opts_.smoothing.batch_size,
                                opts_.coherence_ms);
  if (opts_.track_extras) {
    row.extras = problem_->extra_metrics(joint, eval_stream_);
  }
  rows_.push_back(std::move(row));
}

void Simulation::tick() {
  const std::int64_t t = t_;
  const auto activity = sampler_.sample(t, schedule_streams_);

  // Evaluation contexts. Both joint points exist every tick; agents that
  // query this tick measure their own cost in both.
  const Vector base = joint_theta();
  theta_history_.push_back(base);
  while (static_cast<std::int64_t>(theta_history_.size()) > dmax_ + 1) {
    theta_history_.pop_front();
    ++theta_history_base_;
  }
  Vector perturbed = base;
  for (int i = 0; i < m_; ++i) {
    const Vector& u = agents_[i].perturbations.at(t);
    perturbed.segment(block_offsets_[i], u.size()) += opts_.smoothing.mu * u;
  }

  const int batch = opts_.smoothing.batch_size;
  std::vector<SamplePtr> tick_samples;
  tick_samples.reserve(opts_.smoothing.paired_samples ? batch : 2 * batch);
  std::vector<Vector> base_costs;
  std::vector<Vector> perturbed_costs;
  base_costs.reserve(batch);
  perturbed_costs.reserve(batch);
  bool any_query = false;
  for (const TickActivity& a : activity) any_query |= a.query;
  for (int j = 0; j < batch; ++j) {
    SamplePtr sample = problem_->draw_sample(sample_stream_);
    tick_samples.push_back(sample);
    SamplePtr paired = sample;
    if (!opts_.smoothing.paired_samples) {
      paired = problem_->draw_sample(sample_stream_);
      tick_samples.push_back(paired);
    }
    if (any_query) {
      base_costs.push_back(problem_->cost_all(base, *sample));
      perturbed_costs.push_back(problem_->cost_all(perturbed, *paired));
    }
  }

  // Queries and broadcasts.
  std::vector<Message> outbox;
  std::vector<double> unperturbed(batch), perturbed_vals(batch);
  for (int i = 0; i < m_; ++i) {
    if (!activity[static_cast<std::size_t>(i)].query) continue;
    for (int j = 0; j < batch; ++j) {
      unperturbed[static_cast<std::size_t>(j)] = base_costs[j](i);
      perturbed_vals[static_cast<std::size_t>(j)] = perturbed_costs[j](i);
    }
    const double value =
        compute_query(i, unperturbed, perturbed_vals, opts_.smoothing.mu, m_);
    const QueryRecord rec{i, t, value};
    ingest(i, std::span<const QueryRecord>(&rec, 1));
    if (opts_.comm_mode == CommMode::kDirect) {
      for (int dst : agents_[i].tx_neighbors) {
        if (dst == i) continue;
        outbox.push_back(Message{i, dst, {rec}, t, 0});
      }
    }
  }
  if (opts_.comm_mode == CommMode::kGossip) {
    for (int i = 0; i < m_; ++i) {
      if (!activity[static_cast<std::size_t>(i)].transmit) continue;
      if (agents_[i].memory.size() == 0) continue;
      auto payload = agents_[i].memory.snapshot();
      for (int dst : comm_graph_.out_neighbors(i)) {
        outbox.push_back(Message{i, dst, payload, t, 0});
      }
    }
  }
  transport_.send(std::move(outbox), t, delay_stream_);

  // Deliveries.
  for (Message& msg : transport_.deliver_due(t)) {
    const std::int64_t delay = msg.deliver_time - msg.send_time;
    if (delay < 1 || delay > opts_.transport.d_comm) {
      ++invariants_.delay_violations;
    }
    ingest(msg.dst, msg.payload);
  }
  scan_memories();

  // Next perturbations, then updates.
  for (int i = 0; i < m_; ++i) {
    agents_[i].perturbations.push(
        t + 1, gaussian_vector(perturb_streams_[i], problem_->block_dims()[i]));
  }
  const double gamma = stepsize(t, opts_.stepsize);
  for (int i = 0; i < m_; ++i) {
    const Vector direction = build_update_direction(
        agents_[i], t, activity[static_cast<std::size_t>(i)].update);
    if (activity[static_cast<std::size_t>(i)].update) {
      apply_update(agents_[i], gamma, direction);
    }
  }

  problem_->advance_history(tick_samples);
  if ((t + 1) % opts_.metrics_period == 0) {
    record_metrics();
  }
  ++t_;
}

std::vector<MetricsRow> Simulation::run(std::int64_t ticks) {
  if (ticks < 0) {
    throw ConfigError("Simulation::run: ticks must be non-negative");
  }
  const std::size_t start = rows_.size();
  for (std::int64_t k = 0; k < ticks; ++k) tick();
  return {rows_.begin() + static_cast<std::ptrdiff_t>(start), rows_.end()};
}

}  // namespace zosim
