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

#include "zosim/config.hpp"

#include <fstream>
#include <set>
#include <utility>
#include <vector>

#include "zosim/errors.hpp"

namespace zosim {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "' " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads one JSON object, tracking which keys were consumed so that finish()
// can reject anything unrecognized by its full dotted path. Absent keys
// leave the caller's default in place.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError("config section '" +
                        (path_.empty() ? std::string("<root>") : path_) +
                        "' must be a JSON object");
    }
  }

  const json* section(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = section(key)) {
      if (!v->is_string()) fail(join(path_, key), "must be a string");
      out = v->get<std::string>();
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = section(key)) {
      if (!v->is_boolean()) fail(join(path_, key), "must be a boolean");
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, double& out) {
    if (const json* v = section(key)) {
      if (!v->is_number()) fail(join(path_, key), "must be a number");
      out = v->get<double>();
    }
  }

  void get(const std::string& key, int& out) {
    if (const json* v = section(key)) {
      if (!v->is_number_integer() && !v->is_number_unsigned()) {
        fail(join(path_, key), "must be an integer");
      }
      out = v->get<int>();
    }
  }

  void get(const std::string& key, std::int64_t& out) {
    if (const json* v = section(key)) {
      if (!v->is_number_integer() && !v->is_number_unsigned()) {
        fail(join(path_, key), "must be an integer");
      }
      out = v->get<std::int64_t>();
    }
  }

  void get(const std::string& key, std::uint64_t& out) {
    if (const json* v = section(key)) {
      if (!(v->is_number_unsigned() ||
            (v->is_number_integer() && v->get<std::int64_t>() >= 0))) {
        fail(join(path_, key), "must be a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void get(const std::string& key, std::optional<ExplicitSchedule>& out) {
    const json* v = section(key);
    if (v == nullptr) return;
    const std::string path = join(path_, key);
    if (!v->is_array()) {
      fail(path, "must be an array of per-agent tick arrays");
    }
    ExplicitSchedule schedule;
    schedule.reserve(v->size());
    for (const json& agent_ticks : *v) {
      if (!agent_ticks.is_array()) {
        fail(path, "must be an array of per-agent tick arrays");
      }
      std::vector<std::int64_t> ticks;
      ticks.reserve(agent_ticks.size());
      for (const json& t : agent_ticks) {
        if (!(t.is_number_unsigned() ||
              (t.is_number_integer() && t.get<std::int64_t>() >= 0))) {
          fail(path, "must contain non-negative integer ticks");
        }
        ticks.push_back(t.get<std::int64_t>());
      }
      schedule.push_back(std::move(ticks));
    }
    out = std::move(schedule);
  }

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        fail(join(path_, it.key()), "is not a recognized field");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string coupling_name(QuadCoupling c) {
  return c == QuadCoupling::kHouseholder ? "householder" : "ring";
}

QuadCoupling coupling_value(const std::string& s, const std::string& path) {
  if (s == "householder") return QuadCoupling::kHouseholder;
  if (s == "ring") return QuadCoupling::kRing;
  fail(path, "must be 'householder' or 'ring'");
}

std::string init_name(MlpInit v) {
  return v == MlpInit::kFanInGaussian ? "fan_in_gaussian" : "zero";
}

MlpInit init_value(const std::string& s, const std::string& path) {
  if (s == "fan_in_gaussian") return MlpInit::kFanInGaussian;
  if (s == "zero") return MlpInit::kZero;
  fail(path, "must be 'fan_in_gaussian' or 'zero'");
}

std::string mode_name(CommMode m) {
  return m == CommMode::kDirect ? "direct" : "gossip";
}

CommMode mode_value(const std::string& s, const std::string& path) {
  if (s == "direct") return CommMode::kDirect;
  if (s == "gossip") return CommMode::kGossip;
  fail(path, "must be 'direct' or 'gossip'");
}

std::string kind_name(StepsizeKind k) {
  switch (k) {
    case StepsizeKind::kPowerQuarter:
      return "power_quarter";
    case StepsizeKind::kInvSqrt:
      return "inv_sqrt";
    case StepsizeKind::kConstant:
      return "constant";
  }
  return "power_quarter";
}

StepsizeKind kind_value(const std::string& s, const std::string& path) {
  if (s == "power_quarter") return StepsizeKind::kPowerQuarter;
  if (s == "inv_sqrt") return StepsizeKind::kInvSqrt;
  if (s == "constant") return StepsizeKind::kConstant;
  fail(path, "must be 'power_quarter', 'inv_sqrt', or 'constant'");
}

json schedule_to_json(const ExplicitSchedule& schedule) {
  json out = json::array();
  for (const auto& ticks : schedule) {
    json agent = json::array();
    for (std::int64_t t : ticks) agent.push_back(t);
    out.push_back(std::move(agent));
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::ordered_json& j) {
  RunConfig cfg;
  ObjectReader root(j, "");
  root.get("problem", cfg.problem);

  if (const json* s = root.section("quadratic")) {
    ObjectReader r(*s, "quadratic");
    r.get("num_agents", cfg.quadratic.num_agents);
    r.get("block_dim", cfg.quadratic.block_dim);
    std::string coupling = coupling_name(cfg.quadratic.coupling);
    r.get("coupling", coupling);
    cfg.quadratic.coupling = coupling_value(coupling, "quadratic.coupling");
    r.get("ring_strength", cfg.quadratic.ring_strength);
    r.get("noise_sd", cfg.quadratic.noise_sd);
    r.get("target_scale", cfg.quadratic.target_scale);
    r.get("theta0_spread", cfg.quadratic.theta0_spread);
    r.finish();
  }

  if (const json* s = root.section("wireless")) {
    ObjectReader r(*s, "wireless");
    r.get("num_agents", cfg.wireless.num_agents);
    r.get("feature_hops", cfg.wireless.feature_hops);
    r.get("threshold", cfg.wireless.threshold);
    r.get("power_max", cfg.wireless.power_max);
    r.get("pathloss_exponent", cfg.wireless.pathloss_exponent);
    r.get("eval_samples", cfg.wireless.eval_samples);
    std::string init = init_name(cfg.wireless.policy_init);
    r.get("policy_init", init);
    cfg.wireless.policy_init = init_value(init, "wireless.policy_init");
    r.finish();
  }

  if (const json* s = root.section("comm")) {
    ObjectReader r(*s, "comm");
    std::string mode = mode_name(cfg.comm_mode);
    r.get("mode", mode);
    cfg.comm_mode = mode_value(mode, "comm.mode");
    r.get("d_comm", cfg.transport.d_comm);
    r.get("fixed_delay", cfg.transport.fixed_delay);
    r.get("gossip_block", cfg.gossip_block);
    r.get("graph_file", cfg.graph_file);
    r.finish();
  }

  if (const json* s = root.section("activity")) {
    ObjectReader r(*s, "activity");
    r.get("p_query", cfg.activity.p_query);
    r.get("p_update", cfg.activity.p_update);
    r.get("p_transmit", cfg.activity.p_transmit);
    r.get("window", cfg.activity.window);
    r.get("query_schedule", cfg.activity.query_schedule);
    r.get("update_schedule", cfg.activity.update_schedule);
    r.get("transmit_schedule", cfg.activity.transmit_schedule);
    r.finish();
  }

  if (const json* s = root.section("smoothing")) {
    ObjectReader r(*s, "smoothing");
    r.get("mu", cfg.smoothing.mu);
    r.get("batch_size", cfg.smoothing.batch_size);
    r.get("paired_samples", cfg.smoothing.paired_samples);
    r.finish();
  }

  if (const json* s = root.section("stepsize")) {
    ObjectReader r(*s, "stepsize");
    std::string kind = kind_name(cfg.stepsize.kind);
    r.get("kind", kind);
    cfg.stepsize.kind = kind_value(kind, "stepsize.kind");
    r.get("gamma0", cfg.stepsize.gamma0);
    r.get("r", cfg.stepsize.r);
    r.get("theory_fraction", cfg.theory_fraction);
    r.finish();
  }

  if (const json* s = root.section("run")) {
    ObjectReader r(*s, "run");
    r.get("num_ticks", cfg.num_ticks);
    r.get("master_seed", cfg.master_seed);
    r.get("replicates", cfg.replicates);
    r.get("metrics_period", cfg.metrics_period);
    r.get("track_gradient", cfg.track_gradient);
    r.get("track_extras", cfg.track_extras);
    r.get("coherence_ms", cfg.coherence_ms);
    r.get("mc_gradient_period", cfg.mc_gradient_period);
    r.get("mc_gradient_samples", cfg.mc_gradient_samples);
    r.finish();
  }

  root.finish();
  validate_run_config(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::ordered_json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["problem"] = cfg.problem;
  j["quadratic"] = {{"num_agents", cfg.quadratic.num_agents},
                    {"block_dim", cfg.quadratic.block_dim},
                    {"coupling", coupling_name(cfg.quadratic.coupling)},
                    {"ring_strength", cfg.quadratic.ring_strength},
                    {"noise_sd", cfg.quadratic.noise_sd},
                    {"target_scale", cfg.quadratic.target_scale},
                    {"theta0_spread", cfg.quadratic.theta0_spread}};
  j["wireless"] = {{"num_agents", cfg.wireless.num_agents},
                   {"feature_hops", cfg.wireless.feature_hops},
                   {"threshold", cfg.wireless.threshold},
                   {"power_max", cfg.wireless.power_max},
                   {"pathloss_exponent", cfg.wireless.pathloss_exponent},
                   {"eval_samples", cfg.wireless.eval_samples},
                   {"policy_init", init_name(cfg.wireless.policy_init)}};
  j["comm"] = {{"mode", mode_name(cfg.comm_mode)},
               {"d_comm", cfg.transport.d_comm},
               {"fixed_delay", cfg.transport.fixed_delay},
               {"gossip_block", cfg.gossip_block},
               {"graph_file", cfg.graph_file}};
  json activity = {{"p_query", cfg.activity.p_query},
                   {"p_update", cfg.activity.p_update},
                   {"p_transmit", cfg.activity.p_transmit},
                   {"window", cfg.activity.window}};
  if (cfg.activity.query_schedule) {
    activity["query_schedule"] = schedule_to_json(*cfg.activity.query_schedule);
  }
  if (cfg.activity.update_schedule) {
    activity["update_schedule"] =
        schedule_to_json(*cfg.activity.update_schedule);
  }
  if (cfg.activity.transmit_schedule) {
    activity["transmit_schedule"] =
        schedule_to_json(*cfg.activity.transmit_schedule);
  }
  j["activity"] = std::move(activity);
  j["smoothing"] = {{"mu", cfg.smoothing.mu},
                    {"batch_size", cfg.smoothing.batch_size},
                    {"paired_samples", cfg.smoothing.paired_samples}};
  j["stepsize"] = {{"kind", kind_name(cfg.stepsize.kind)},
                   {"gamma0", cfg.stepsize.gamma0},
                   {"r", cfg.stepsize.r},
                   {"theory_fraction", cfg.theory_fraction}};
  j["run"] = {{"num_ticks", cfg.num_ticks},
              {"master_seed", cfg.master_seed},
              {"replicates", cfg.replicates},
              {"metrics_period", cfg.metrics_period},
              {"track_gradient", cfg.track_gradient},
              {"track_extras", cfg.track_extras},
              {"coherence_ms", cfg.coherence_ms},
              {"mc_gradient_period", cfg.mc_gradient_period},
              {"mc_gradient_samples", cfg.mc_gradient_samples}};
  return j;
}

void apply_override(nlohmann::ordered_json& j, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment +
                      "' is not of the form path.to.field=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string seg = path.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (seg.empty()) {
      throw ConfigError("override path '" + path + "' has an empty segment");
    }
    segments.push_back(seg);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  json* at = &j;
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    if (!at->is_object() && !at->is_null()) {
      throw ConfigError("override path '" + path +
                        "' descends through a non-object value");
    }
    at = &(*at)[segments[k]];
  }
  if (!at->is_object() && !at->is_null()) {
    throw ConfigError("override path '" + path +
                      "' descends through a non-object value");
  }

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // unquoted strings stay strings
  }
  (*at)[segments.back()] = std::move(value);
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.problem != "quadratic" && cfg.problem != "wireless") {
    fail("problem", "must be 'quadratic' or 'wireless'");
  }
  if (cfg.problem == "wireless" && cfg.smoothing.paired_samples) {
    fail("smoothing.paired_samples",
         "is not available for the wireless problem: one fading draw cannot "
         "be measured at two parameter points");
  }
  if (cfg.theory_fraction < 0.0) {
    fail("stepsize.theory_fraction", "must be non-negative");
  }
  if (cfg.theory_fraction > 0.0 && cfg.problem != "quadratic") {
    fail("stepsize.theory_fraction",
         "needs a problem with a known curvature constant");
  }
  if (!(cfg.stepsize.gamma0 > 0.0)) {
    fail("stepsize.gamma0", "must be positive");
  }
  if (!(cfg.stepsize.r > 0.0)) {
    fail("stepsize.r", "must be positive");
  }
  if (cfg.transport.d_comm < 1) {
    fail("comm.d_comm", "must be at least 1");
  }
  if (cfg.comm_mode == CommMode::kDirect && !cfg.graph_file.empty()) {
    fail("comm.graph_file", "requires comm.mode 'gossip'");
  }
  const std::pair<const char*, double> probs[] = {
      {"activity.p_query", cfg.activity.p_query},
      {"activity.p_update", cfg.activity.p_update},
      {"activity.p_transmit", cfg.activity.p_transmit}};
  for (const auto& [name, p] : probs) {
    if (!(p >= 0.0 && p <= 1.0)) fail(name, "must lie in [0, 1]");
  }
  if (cfg.activity.window < 1) {
    fail("activity.window", "must be at least 1");
  }
  if (!(cfg.smoothing.mu > 0.0)) {
    fail("smoothing.mu", "must be positive");
  }
  if (cfg.smoothing.batch_size < 1) {
    fail("smoothing.batch_size", "must be at least 1");
  }
  if (cfg.num_ticks < 0) {
    fail("run.num_ticks", "must be non-negative");
  }
  if (cfg.replicates < 1) {
    fail("run.replicates", "must be at least 1");
  }
  if (cfg.metrics_period < 1) {
    fail("run.metrics_period", "must be at least 1");
  }
  if (!(cfg.coherence_ms > 0.0)) {
    fail("run.coherence_ms", "must be positive");
  }
  if (cfg.mc_gradient_period < 0 || cfg.mc_gradient_samples < 0) {
    fail("run.mc_gradient_period", "and run.mc_gradient_samples must be "
         "non-negative");
  }
}

}  // namespace zosim
