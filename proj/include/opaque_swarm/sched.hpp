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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opaque_swarm/geom.hpp"
#include "opaque_swarm/model.hpp"

namespace opaque_swarm {

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ActivationSet = std::vector<std::size_t>;

struct AsyncActivation {
  std::size_t robot = 0;
  double t_look = 0.0;
  double t_move_start = 0.0;
  double t_move_end = 0.0;

  friend bool operator==(const AsyncActivation&, const AsyncActivation&) = default;
};

/// Either a round sequence (FSYNC, SSYNC) or a list of asynchronous activations.
struct Schedule {
  SyncMode mode = SyncMode::kFsync;
  std::vector<ActivationSet> rounds;
  std::vector<AsyncActivation> activations;

  bool is_async() const { return mode == SyncMode::kAsync; }
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class GeneratorKind { kFsync, kSsyncRandom, kAsyncRandom, kScripted };

struct DurationLaw {
  double step_min = 0.1, step_max = 2.0;
  double idle_min = 0.1, idle_max = 4.0;
};

struct ScheduleSpec {
  SyncMode mode = SyncMode::kFsync;
  GeneratorKind generator = GeneratorKind::kFsync;
  std::uint64_t seed = 0;
  double activation_prob = 0.5;
  DurationLaw durations;
  /// Rounds for FSYNC and SSYNC, time units for ASYNC.
  double horizon = 0.0;
  Schedule script;
};

namespace detail {

inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

}  // namespace detail

inline std::size_t default_max_gap(std::size_t n) { return 4 * n; }

/// SSYNC rounds: independent Bernoulli(p) membership, empty rounds re-rolled,
/// robots idle for 4n rounds forced into the next one.
inline std::vector<ActivationSet> ssync_rounds(std::size_t n, std::size_t count, std::uint64_t seed,
                                               double p) {
  auto rng = detail::seeded_stream(seed, 0x55);
  std::bernoulli_distribution coin(p);
  std::vector<std::size_t> idle(n, 0);
  std::vector<ActivationSet> rounds;
  rounds.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    ActivationSet set;
    while (set.empty()) {
      for (std::size_t i = 0; i < n; ++i)
        if (coin(rng) || idle[i] >= default_max_gap(n)) set.push_back(i);
    }
    std::vector<bool> in(n, false);
    for (auto i : set) in[i] = true;
    for (std::size_t i = 0; i < n; ++i) idle[i] = in[i] ? 0 : idle[i] + 1;
    rounds.push_back(std::move(set));
  }
  return rounds;
}

inline std::vector<AsyncActivation> async_stream(std::size_t n, double horizon, std::uint64_t seed,
                                                 const DurationLaw& law = {}) {
  std::vector<AsyncActivation> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = detail::seeded_stream(seed, i);
    double t = detail::log_uniform(rng, law.idle_min, law.idle_max);
    while (t <= horizon) {
      AsyncActivation a;
      a.robot = i;
      a.t_look = t;
      a.t_move_start = t + detail::log_uniform(rng, law.step_min, law.step_max);
      a.t_move_end = a.t_move_start + detail::log_uniform(rng, law.step_min, law.step_max);
      out.push_back(a);
      t = a.t_move_end + detail::log_uniform(rng, law.idle_min, law.idle_max);
    }
  }
  std::sort(out.begin(), out.end(), [](const AsyncActivation& a, const AsyncActivation& b) {
    return a.t_look != b.t_look ? a.t_look < b.t_look : a.robot < b.robot;
  });
  return out;
}

inline void validate_schedule(const Schedule& s, std::size_t n) {
  if (s.is_async()) {
    std::vector<double> last_end(n, -1.0);
    auto sorted = s.activations;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.t_look < b.t_look; });
    for (const auto& a : sorted) {
      if (a.robot >= n) throw ScheduleError("activation robot index out of range");
      if (!std::isfinite(a.t_look) || !std::isfinite(a.t_move_start) || !std::isfinite(a.t_move_end) ||
          a.t_look < 0.0 || a.t_look > a.t_move_start || a.t_move_start > a.t_move_end)
        throw ScheduleError("activation times must satisfy 0 <= look <= move_start <= move_end");
      if (a.t_look <= last_end[a.robot]) throw ScheduleError("overlapping activations of one robot");
      last_end[a.robot] = a.t_move_end;
    }
    return;
  }
  for (const auto& round : s.rounds) {
    if (round.empty()) throw ScheduleError("empty round");
    for (auto i : round)
      if (i >= n) throw ScheduleError("round robot index out of range");
    if (s.mode == SyncMode::kFsync && round.size() != n)
      throw ScheduleError("FSYNC round must activate every robot");
  }
}

inline Schedule generate(const ScheduleSpec& spec, std::size_t n) {
  if (n == 0) throw ScheduleError("n_robots must be positive");
  if (!(spec.horizon > 0.0)) throw ScheduleError("horizon must be positive");
  Schedule s;
  s.mode = spec.mode;
  const auto rounds = static_cast<std::size_t>(std::ceil(spec.horizon));
  switch (spec.generator) {
    case GeneratorKind::kFsync: {
      if (spec.mode != SyncMode::kFsync) throw ScheduleError("fsync generator needs FSYNC mode");
      ActivationSet all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      s.rounds.assign(rounds, all);
      break;
    }
    case GeneratorKind::kSsyncRandom:
      if (spec.mode != SyncMode::kSsync) throw ScheduleError("ssync generator needs SSYNC mode");
      if (!(spec.activation_prob > 0.0 && spec.activation_prob <= 1.0))
        throw ScheduleError("activation probability must lie in (0, 1]");
      s.rounds = ssync_rounds(n, rounds, spec.seed, spec.activation_prob);
      break;
    case GeneratorKind::kAsyncRandom:
      if (spec.mode != SyncMode::kAsync) throw ScheduleError("async generator needs ASYNC mode");
      s.activations = async_stream(n, spec.horizon, spec.seed, spec.durations);
      break;
    case GeneratorKind::kScripted:
      s = spec.script;
      s.mode = spec.mode;
      if (s.is_async() != !spec.script.activations.empty() && !spec.script.rounds.empty())
        throw ScheduleError("scripted schedule does not match the mode");
      break;
  }
  validate_schedule(s, n);
  return s;
}

struct FairnessResult {
  bool ok = true;
  std::optional<std::size_t> starved;

  explicit operator bool() const { return ok; }
};

/// A round schedule fails when some robot has an idle run longer than `max_gap`
/// rounds or is never activated; an async schedule fails when some robot never looks.
inline FairnessResult check_fairness(const Schedule& s, std::size_t n,
                                     std::optional<std::size_t> max_gap = std::nullopt) {
  std::vector<bool> seen(n, false);
  if (s.is_async()) {
    for (const auto& a : s.activations)
      if (a.robot < n) seen[a.robot] = true;
  } else {
    const std::size_t gap = max_gap.value_or(default_max_gap(n));
    std::vector<std::size_t> idle(n, 0);
    for (const auto& round : s.rounds) {
      std::vector<bool> in(n, false);
      for (auto i : round)
        if (i < n) in[i] = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (in[i]) {
          seen[i] = true;
          idle[i] = 0;
        } else if (++idle[i] > gap) {
          return {false, i};
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) return {false, i};
  return {};
}

/// Closed window; round indices for round schedules, look times for async ones.
struct Epoch {
  double begin = 0.0;
  double end = 0.0;

  friend bool operator==(const Epoch&, const Epoch&) = default;
};

class StarvedRobotError : public ScheduleError {
 public:
  StarvedRobotError(std::size_t robot, std::vector<Epoch> partial)
      : ScheduleError("robot " + std::to_string(robot) + " is never activated"),
        robot_(robot),
        partial_(std::move(partial)) {}
  std::size_t robot() const { return robot_; }
  const std::vector<Epoch>& partial() const { return partial_; }

 private:
  std::size_t robot_;
  std::vector<Epoch> partial_;
};

namespace detail {

struct Tick {
  double t;
  std::size_t robot;
};

inline std::vector<Epoch> greedy_epochs(const std::vector<std::vector<Tick>>& groups,
                                        std::size_t n) {
  std::vector<Epoch> out;
  std::vector<bool> covered(n, false);
  std::vector<bool> ever(n, false);
  std::size_t count = 0;
  bool open = false;
  double begin = 0.0;
  for (const auto& group : groups) {
    if (group.empty()) continue;
    if (!open) {
      open = true;
      begin = group.front().t;
    }
    for (const auto& tick : group) {
      ever[tick.robot] = true;
      if (!covered[tick.robot]) {
        covered[tick.robot] = true;
        ++count;
      }
    }
    if (count == n) {
      out.push_back({begin, group.front().t});
      std::fill(covered.begin(), covered.end(), false);
      count = 0;
      open = false;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!ever[i]) throw StarvedRobotError(i, out);
  return out;
}

}  // namespace detail

/// Greedy left-to-right partition into minimal windows covering every robot.
/// A trailing window that does not cover everyone is dropped.
inline std::vector<Epoch> epoch_partition(const Schedule& s, std::size_t n) {
  std::vector<std::vector<detail::Tick>> groups;
  if (s.is_async()) {
    for (const auto& a : s.activations) groups.push_back({{a.t_look, a.robot}});
    std::stable_sort(groups.begin(), groups.end(),
                     [](const auto& a, const auto& b) { return a[0].t < b[0].t; });
  } else {
    for (std::size_t r = 0; r < s.rounds.size(); ++r) {
      std::vector<detail::Tick> g;
      for (auto i : s.rounds[r]) g.push_back({static_cast<double>(r), i});
      groups.push_back(std::move(g));
    }
  }
  return detail::greedy_epochs(groups, n);
}

/// Instant at which a robot moving linearly from `from` (at t0) to `to` (at t1)
/// lies on the line through b and c.
inline std::optional<double> collinearity_timed_look(Point from, Point to, double t0, double t1, Point b,
                                                     Point c, const Tolerance& tol = {}) {
  const Point dir = c - b;
  const double f0 = cross(from - b, dir);
  const double slope = cross(to - from, dir);
  const double scale = std::max({norm(dir), norm(to - from), norm(from - b), 1e-300});
  const double thr = tol.at(scale) * scale;
  if (std::abs(slope) <= thr) {
    if (std::abs(f0) <= thr) return t0;
    return std::nullopt;
  }
  const double s = -f0 / slope;
  if (s < 0.0 || s > 1.0) return std::nullopt;
  return t0 + s * (t1 - t0);
}

/// Rounds 0..t-1 of `base`, then {target} twice, then `tail`.
inline Schedule splice_double_activation(const Schedule& base, std::size_t t, std::size_t target,
                                         const std::vector<ActivationSet>& tail) {
  Schedule out;
  out.mode = SyncMode::kSsync;
  out.rounds.assign(base.rounds.begin(), base.rounds.begin() + static_cast<std::ptrdiff_t>(t));
  out.rounds.push_back({target});
  out.rounds.push_back({target});
  out.rounds.insert(out.rounds.end(), tail.begin(), tail.end());
  return out;
}

/// One round per line, comma-separated robot indices. Blank lines and '#' comments are skipped.
inline std::vector<ActivationSet> parse_round_script(std::istream& in) {
  std::vector<ActivationSet> rounds;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r{}") == std::string::npos) continue;
    for (char& ch : line)
      if (ch == '{' || ch == '}') ch = ' ';
    ActivationSet set;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        set.push_back(static_cast<std::size_t>(std::stoul(tok)));
      } catch (const std::exception&) {
        throw ScheduleError("bad robot index in round script: " + tok);
      }
    }
    rounds.push_back(std::move(set));
  }
  return rounds;
}

/// JSON-lines of {"robot", "t_look", "t_move_start", "t_move_end"}.
inline std::vector<AsyncActivation> parse_async_script(std::istream& in) {
  std::vector<AsyncActivation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("robot").get<std::size_t>(), j.at("t_look").get<double>(),
                     j.at("t_move_start").get<double>(), j.at("t_move_end").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw ScheduleError(std::string("bad async script line: ") + e.what());
    }
  }
  return out;
}

inline Schedule load_script(const std::string& path, SyncMode mode) {
  std::ifstream in(path);
  if (!in) throw ScheduleError("cannot open schedule script " + path);
  Schedule s;
  s.mode = mode;
  if (mode == SyncMode::kAsync)
    s.activations = parse_async_script(in);
  else
    s.rounds = parse_round_script(in);
  return s;
}

/// Parses "fsync", "ssync:seed=7,p=0.5", "async:seed=2" and "script:<mode>:<path>".
inline ScheduleSpec parse_schedule_spec(const std::string& text, double horizon) {
  ScheduleSpec spec;
  spec.horizon = horizon;
  auto colon = text.find(':');
  std::string head = lower(text.substr(0, colon));
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "script") {
    auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw ScheduleError("script spec needs script:<mode>:<path>");
    auto mode = parse_sync(rest.substr(0, c2));
    if (!mode) throw ScheduleError("unknown schedule mode in script spec");
    spec.mode = *mode;
    spec.generator = GeneratorKind::kScripted;
    spec.script = load_script(rest.substr(c2 + 1), *mode);
    return spec;
  }
  if (head == "fsync" || head == "f") {
    spec.mode = SyncMode::kFsync;
    spec.generator = GeneratorKind::kFsync;
  } else if (head == "ssync" || head == "s") {
    spec.mode = SyncMode::kSsync;
    spec.generator = GeneratorKind::kSsyncRandom;
  } else if (head == "async" || head == "a") {
    spec.mode = SyncMode::kAsync;
    spec.generator = GeneratorKind::kAsyncRandom;
  } else {
    throw ScheduleError("unknown schedule kind: " + head);
  }
  std::stringstream ss(rest);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    if (kv.empty()) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ScheduleError("schedule parameter needs key=value: " + kv);
    std::string key = lower(kv.substr(0, eq));
    std::string val = kv.substr(eq + 1);
    try {
      if (key == "seed")
        spec.seed = std::stoull(val);
      else if (key == "p")
        spec.activation_prob = std::stod(val);
      else
        throw ScheduleError("unknown schedule parameter: " + key);
    } catch (const std::logic_error&) {
      throw ScheduleError("bad schedule parameter value: " + kv);
    }
  }
  return spec;
}

}  // namespace opaque_swarm
