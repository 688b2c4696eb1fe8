// Copyright 2026 The opaque-swarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// One seeded run of an algorithm on a problem instance, with its monitor report.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opaque_swarm/algos.hpp"
#include "opaque_swarm/problems.hpp"
#include "opaque_swarm/sched.hpp"
#include "opaque_swarm/trace_io.hpp"

namespace opaque_swarm {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string algorithm;
  /// Defaults to the algorithm's weakest model.
  std::optional<ModelId> model;
  /// Defaults to the algorithm's problem.
  std::string problem;
  /// Generator parameters; "seed" defaults to the run seed.
  Params gen;
  /// JSON instance file; overrides the generator.
  std::string instance;
  /// Schedule spec text; empty selects a random fair schedule of the model's mode.
  std::string schedule;
  /// Zero selects 200 time units for round schedules and 600 for ASYNC.
  double horizon = 0.0;
  std::optional<bool> transparent;
  std::uint64_t seed = 1;
  Tolerance tol;
};

inline constexpr std::uint64_t kScheduleSeedStride = 7919;

inline std::string default_schedule(SyncMode mode, std::uint64_t seed) {
  const auto s = std::to_string(seed * kScheduleSeedStride);
  switch (mode) {
    case SyncMode::kFsync: return "fsync";
    case SyncMode::kSsync: return "ssync:seed=" + s;
    case SyncMode::kAsync: return "async:seed=" + s;
  }
  return "fsync";
}

inline double default_horizon(SyncMode mode) { return mode == SyncMode::kAsync ? 600.0 : 200.0; }

/// Fully resolved configuration.
struct ResolvedRun {
  AlgorithmInfo info;
  ModelId model;
  std::string problem;
  std::string schedule;
  double horizon = 0.0;
  bool transparent = false;
};

inline ResolvedRun resolve(const RunConfig& c) {
  if (c.algorithm.empty()) throw UsageError("missing --algo");
  auto info = algorithm_info(c.algorithm);
  if (!info) throw UsageError("unknown algorithm: " + c.algorithm);
  ResolvedRun r;
  r.info = *info;
  r.model = c.model.value_or(info->weakest);
  auto alg = make_algorithm(c.algorithm);
  auto compat = alg->compatible();
  if (std::find(compat.begin(), compat.end(), r.model) == compat.end())
    throw UsageError(c.algorithm + " is not designed for " + to_string(r.model));
  r.problem = c.problem.empty() ? info->problem : canonical_problem(c.problem);
  if (r.problem.empty()) throw UsageError("missing --problem");
  if (!info->problem.empty() && r.problem != info->problem)
    throw UsageError(c.algorithm + " solves " + info->problem + ", not " + r.problem);
  r.schedule = c.schedule.empty() ? default_schedule(r.model.sync, c.seed) : c.schedule;
  r.horizon = c.horizon > 0.0 ? c.horizon : default_horizon(r.model.sync);
  r.transparent = c.transparent.value_or(info->transparent);
  return r;
}

struct RunOutcome {
  ResolvedRun resolved;
  ProblemSpec spec;
  Trace trace;
  MonitorResult monitor;
  /// Offline collision check of the finished trace.
  std::vector<Violation> collisions;
  /// Complete epochs of the schedule within the horizon.
  std::size_t epochs = 0;

  bool ok() const {
    return monitor.satisfied(spec) && monitor.clean() && trace.violations.empty() && collisions.empty();
  }
};

inline ProblemSpec build_instance(const RunConfig& c, const std::string& problem) {
  if (!c.instance.empty()) {
    std::ifstream in(c.instance);
    if (!in) throw UsageError("cannot open instance file " + c.instance);
    return problem_from_json(nlohmann::json::parse(in));
  }
  Params p = c.gen;
  if (!p.count("seed")) p["seed"] = static_cast<double>(c.seed);
  return make_problem(problem, p);
}

inline RunOutcome execute(const RunConfig& c) {
  RunOutcome out;
  out.resolved = resolve(c);
  const auto& r = out.resolved;
  out.spec = build_instance(c, r.problem);
  out.spec.tol = c.tol;
  auto sspec = parse_schedule_spec(r.schedule, r.horizon);
  if (sspec.mode != r.model.sync) throw UsageError("schedule mode does not match " + to_string(r.model));
  auto schedule = generate(sspec, out.spec.initial.size());
  auto alg = make_algorithm(r.info.name);
  RunOptions opts;
  opts.tol = c.tol;
  out.trace = run(r.model, *alg, out.spec.initial, schedule, r.horizon, r.transparent, c.seed, opts);
  out.monitor = monitor(out.spec, out.trace);
  out.collisions = collision_monitor(out.trace, c.tol);
  std::vector<Epoch> epochs;
  try {
    epochs = epoch_partition(schedule, out.spec.initial.size());
  } catch (const StarvedRobotError& e) {
    epochs = e.partial();
  }
  for (const auto& e : epochs)
    if (e.end <= r.horizon) ++out.epochs;
  return out;
}

inline nlohmann::json violations_json(const std::vector<Violation>& vs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : vs) j.push_back(violation_json(v));
  return j;
}

/// Report embedding the configuration, the seeds and the monitor results.
inline nlohmann::json report_json(const RunConfig& c, const RunOutcome& o) {
  const auto& r = o.resolved;
  const auto& p = o.monitor.progress;
  nlohmann::json j;
  j["algorithm"] = r.info.name;
  j["model"] = to_string(r.model);
  j["problem"] = r.problem;
  j["params"] = o.spec.params;
  j["seed"] = c.seed;
  j["schedule"] = r.schedule;
  j["horizon"] = r.horizon;
  j["transparent"] = r.transparent;
  j["phases_completed"] = p.phases_completed;
  j["phase_count"] = o.spec.phases.size();
  j["cycles"] = p.cycles;
  j["finished"] = p.finished;
  j["stable_epochs"] = p.stable_epochs;
  j["epochs"] = o.epochs;
  j["events"] = o.trace.events.size();
  j["engine_violations"] = violations_json(o.trace.violations);
  j["monitor_violations"] = violations_json(o.monitor.violations);
  j["collisions"] = violations_json(o.collisions);
  j["ok"] = o.ok();
  return j;
}

}  // namespace opaque_swarm
