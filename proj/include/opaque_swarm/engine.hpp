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
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "opaque_swarm/geom.hpp"
#include "opaque_swarm/model.hpp"
#include "opaque_swarm/sched.hpp"

namespace opaque_swarm {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output of one compute step. An empty color keeps the current light.
struct Decision {
  Point destination;
  std::optional<Color> color = std::nullopt;
};

class Algorithm {
 public:
  virtual ~Algorithm() = default;
  virtual std::string name() const = 0;
  /// Always contains kOff.
  virtual std::vector<Color> palette() const { return {kOff}; }
  virtual std::vector<ModelId> compatible() const = 0;
  virtual Decision decide(const Snapshot& snapshot) const = 0;
};

/// Stays put forever.
class NullAlgorithm : public Algorithm {
 public:
  std::string name() const override { return "null"; }
  std::vector<ModelId> compatible() const override { return all_models(); }
  Decision decide(const Snapshot&) const override { return {{0.0, 0.0}, std::nullopt}; }
};

enum class EventKind { kRoundBegin, kLook, kLight, kMoveStart, kMoveEnd, kRoundEnd };

inline int rank(EventKind k) { return static_cast<int>(k); }

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kRoundBegin: return "round_begin";
    case EventKind::kLook: return "look";
    case EventKind::kLight: return "light";
    case EventKind::kMoveStart: return "move_start";
    case EventKind::kMoveEnd: return "move_end";
    case EventKind::kRoundEnd: return "round_end";
  }
  return "?";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::kRoundBegin, EventKind::kLook, EventKind::kLight, EventKind::kMoveStart,
                 EventKind::kMoveEnd, EventKind::kRoundEnd})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Payload fields are used per kind:
///   look: visible, to (decided global destination), color (decided color)
///   light: color
///   move_start: from, to, t_end
///   move_end: to (reached position)
///   round_begin / round_end: round
struct TraceEvent {
  double t = 0.0;
  EventKind kind = EventKind::kLook;
  std::optional<std::size_t> robot;
  std::size_t visible = 0;
  Point from;
  Point to;
  double t_end = 0.0;
  Color color;
  std::int64_t round = -1;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class ViolationKind { kMultiplicity, kTrajectoryOverlap, kPathConstraint, kPhaseRegression, kStarvation };

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kMultiplicity: return "Multiplicity";
    case ViolationKind::kTrajectoryOverlap: return "TrajectoryOverlap";
    case ViolationKind::kPathConstraint: return "PathConstraint";
    case ViolationKind::kPhaseRegression: return "PhaseRegression";
    case ViolationKind::kStarvation: return "Starvation";
  }
  return "?";
}

inline std::optional<ViolationKind> parse_violation_kind(std::string_view s) {
  for (auto k : {ViolationKind::kMultiplicity, ViolationKind::kTrajectoryOverlap,
                 ViolationKind::kPathConstraint, ViolationKind::kPhaseRegression,
                 ViolationKind::kStarvation})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline bool is_hard(ViolationKind k) {
  return k == ViolationKind::kMultiplicity || k == ViolationKind::kTrajectoryOverlap;
}

struct Violation {
  ViolationKind kind = ViolationKind::kMultiplicity;
  double t = 0.0;
  std::vector<std::size_t> robots;
  Point where;
  /// Index of the violated path condition, for PathConstraint.
  std::optional<std::size_t> tau;
  std::string details;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Trace {
  ModelId model;
  std::string algorithm;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  bool transparent = false;
  bool halted = false;
  Configuration initial;
  std::vector<TraceEvent> events;
  Configuration final;
  std::vector<Violation> violations;

  std::size_t size() const { return initial.size(); }
};

/// Linear motion of one robot; t_end == t_start means an instantaneous jump.
struct MoveSegment {
  Point from;
  Point to;
  double t_start = 0.0;
  double t_end = 0.0;

  bool null() const { return from == to; }
  Point at(double t) const {
    if (t >= t_end) return to;
    if (t <= t_start) return from;
    double s = (t - t_start) / (t_end - t_start);
    return from + s * (to - from);
  }
};

/// Minimum distance between two linear motions over the common part of their time spans.
inline std::pair<double, double> closest_approach(const MoveSegment& a, const MoveSegment& b) {
  double lo = std::max(a.t_start, b.t_start);
  double hi = std::min(a.t_end, b.t_end);
  if (hi < lo) hi = lo;
  Point d0 = a.at(lo) - b.at(lo);
  Point d1 = a.at(hi) - b.at(hi);
  Point dd = d1 - d0;
  double l2 = dot(dd, dd);
  double s = l2 > 0.0 ? std::clamp(-dot(d0, dd) / l2, 0.0, 1.0) : 0.0;
  return {norm(d0 + s * dd), lo + s * (hi - lo)};
}

/// Checks a starting move `m` of `i` against robot `j`, which is either moving
/// along `other` or parked at `other.from`.
inline std::optional<Violation> check_pair(std::size_t i, const MoveSegment& m, std::size_t j,
                                           const MoveSegment& other, bool other_moving, double thr) {
  if (other_moving && !other.null()) {
    auto [gap, when] = closest_approach(m, other);
    if (gap <= thr)
      return Violation{ViolationKind::kMultiplicity, m.t_start, {std::min(i, j), std::max(i, j)},
                       m.at(when), std::nullopt,
                       "robots meet at t=" + std::to_string(when)};
    if (segment_segment_distance(m.from, m.to, other.from, other.to) <= thr) {
      Point where = m.to;
      double denom = cross(m.to - m.from, other.to - other.from);
      if (denom != 0.0) {
        double s = cross(other.from - m.from, other.to - other.from) / denom;
        where = m.from + std::clamp(s, 0.0, 1.0) * (m.to - m.from);
      }
      return Violation{ViolationKind::kTrajectoryOverlap, m.t_start,
                       {std::min(i, j), std::max(i, j)}, where, std::nullopt,
                       "concurrent paths intersect"};
    }
    return std::nullopt;
  }
  Point p = other.from;
  if (dist(m.to, p) <= thr)
    return Violation{ViolationKind::kMultiplicity, m.t_start, {std::min(i, j), std::max(i, j)}, p,
                     std::nullopt, "destination occupied"};
  if (segment_distance(m.from, m.to, p) <= thr)
    return Violation{ViolationKind::kTrajectoryOverlap, m.t_start, {std::min(i, j), std::max(i, j)},
                     p, std::nullopt, "path crosses a parked robot"};
  return std::nullopt;
}

using TraceMonitor = std::function<std::vector<Violation>(const Trace&)>;

struct RunOptions {
  Tolerance tol;
  std::vector<TraceMonitor> monitors;
  bool halt_on_collision = true;
};

namespace detail {

struct Pending {
  double t;
  EventKind kind;
  std::size_t robot;
  std::size_t slot;

  auto key() const { return std::tuple(t, rank(kind), robot, slot); }
  bool operator>(const Pending& o) const { return key() > o.key(); }
};

struct Activation {
  std::size_t robot;
  double t_look, t_move_start, t_move_end;
  std::int64_t round;
  Point to;
  Color color;
  bool decided = false;
};

constexpr std::size_t kNoRobot = std::numeric_limits<std::size_t>::max();

}  // namespace detail

/// Executes `algorithm` under `model` and `schedule`. Round r of a round schedule
/// looks at time r, switches lights and starts moving at r + 0.25, and arrives at
/// r + 0.75. Activations whose look falls after `horizon` are not started.
inline Trace run(const ModelId& model, const Algorithm& algorithm, const Configuration& initial,
                 const Schedule& schedule, double horizon, bool transparent, std::uint64_t seed,
                 const RunOptions& options = {}) {
  const std::size_t n = initial.size();
  if (!validate_configuration(initial, options.tol).empty())
    throw GeometryError("initial configuration has coinciding robots");
  for (const auto& r : initial.robots)
    if (r.light != kOff) throw ProtocolError("initial lights must be off");
  const auto palette = algorithm.palette();
  auto in_palette = [&](const Color& c) {
    return c == kOff || std::find(palette.begin(), palette.end(), c) != palette.end();
  };
  if (model.light == LightClass::kOblot && palette.size() > 1)
    throw ProtocolError("OBLOT algorithms use the single color off");
  if (schedule.is_async() != (model.sync == SyncMode::kAsync))
    throw ScheduleError("schedule mode does not match the model");
  validate_schedule(schedule, n);

  Trace trace;
  trace.model = model;
  trace.algorithm = algorithm.name();
  trace.seed = seed;
  trace.transparent = transparent;
  trace.initial = initial;

  std::vector<detail::Activation> acts;
  std::priority_queue<detail::Pending, std::vector<detail::Pending>, std::greater<>> queue;
  if (schedule.is_async()) {
    for (const auto& a : schedule.activations) {
      if (a.t_look > horizon) continue;
      acts.push_back({a.robot, a.t_look, a.t_move_start, a.t_move_end, -1, {}, {}, false});
    }
  } else {
    for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
      double t = static_cast<double>(r);
      if (t > horizon) break;
      queue.push({t, EventKind::kRoundBegin, detail::kNoRobot, r});
      queue.push({t + 0.75, EventKind::kRoundEnd, detail::kNoRobot, r});
      for (auto i : schedule.rounds[r])
        acts.push_back({i, t, t + 0.25, t + 0.75, static_cast<std::int64_t>(r), {}, {}, false});
    }
  }
  for (std::size_t k = 0; k < acts.size(); ++k) queue.push({acts[k].t_look, EventKind::kLook, acts[k].robot, k});

  std::vector<Point> parked = initial.positions();
  std::vector<Color> light(n, kOff);
  std::vector<std::optional<MoveSegment>> moving(n);
  std::vector<std::optional<std::size_t>> pending(n);  // decided but not yet started
  std::mt19937_64 rng = detail::seeded_stream(seed, 0xF4A3E);

  auto position = [&](std::size_t i, double t) { return moving[i] ? moving[i]->at(t) : parked[i]; };
  std::vector<bool> ever_active(n, false);

  while (!queue.empty()) {
    auto ev = queue.top();
    queue.pop();
    if (ev.robot == detail::kNoRobot) {
      TraceEvent e;
      e.t = ev.t;
      e.kind = ev.kind;
      e.round = static_cast<std::int64_t>(ev.slot);
      trace.events.push_back(e);
      continue;
    }
    auto& act = acts[ev.slot];
    const std::size_t i = act.robot;
    TraceEvent e;
    e.t = ev.t;
    e.kind = ev.kind;
    e.robot = i;
    switch (ev.kind) {
      case EventKind::kLook: {
        ever_active[i] = true;
        std::vector<Point> pos(n);
        std::vector<Color> seen(n);
        for (std::size_t j = 0; j < n; ++j) {
          pos[j] = position(j, ev.t);
          seen[j] = light[j];
          if (pending[j] && acts[*pending[j]].t_move_start <= ev.t) seen[j] = acts[*pending[j]].color;
        }
        auto frame = LocalFrame::sample(pos[i], rng);
        auto snap = take_snapshot(std::span<const Point>(pos), std::span<const Color>(seen), i, frame,
                                  model, transparent, options.tol, &rng);
        Decision d = algorithm.decide(snap);
        if (!is_finite(d.destination)) throw ProtocolError(algorithm.name() + " produced a non-finite destination");
        Color next = d.color.value_or(light[i]);
        if (!in_palette(next)) throw ProtocolError(algorithm.name() + " emitted color outside its palette: " + next);
        if (model.light == LightClass::kOblot && next != light[i])
          throw ProtocolError("OBLOT robot attempted a light change");
        Point to = frame.to_global(d.destination);
        if (dist(to, pos[i]) <= options.tol.at(diameter(pos))) to = pos[i];
        act.to = to;
        act.color = next;
        act.decided = true;
        pending[i] = ev.slot;
        e.visible = snap.visible.size();
        e.to = to;
        e.color = next;
        trace.events.push_back(e);
        if (next != light[i]) queue.push({act.t_move_start, EventKind::kLight, i, ev.slot});
        queue.push({act.t_move_start, EventKind::kMoveStart, i, ev.slot});
        queue.push({act.t_move_end, EventKind::kMoveEnd, i, ev.slot});
        break;
      }
      case EventKind::kLight:
        light[i] = act.color;
        e.color = act.color;
        trace.events.push_back(e);
        break;
      case EventKind::kMoveStart: {
        MoveSegment m{parked[i], act.to, act.t_move_start, act.t_move_end};
        pending[i].reset();
        moving[i] = m;
        e.from = m.from;
        e.to = m.to;
        e.t_end = m.t_end;
        trace.events.push_back(e);
        if (m.null()) break;
        std::vector<Point> now(n);
        for (std::size_t j = 0; j < n; ++j) now[j] = position(j, ev.t);
        const double thr = options.tol.at(diameter(now));
        std::optional<Violation> hit;
        for (std::size_t j = 0; j < n && !hit; ++j) {
          if (j == i) continue;
          if (moving[j] && moving[j]->t_end > ev.t) {
            hit = check_pair(i, m, j, *moving[j], true, thr);
          } else if (moving[j]) {
            hit = check_pair(i, m, j, {moving[j]->to, moving[j]->to, ev.t, ev.t}, false, thr);
          } else if (pending[j] && acts[*pending[j]].t_move_start == ev.t) {
            const auto& pj = acts[*pending[j]];
            hit = check_pair(i, m, j, {parked[j], pj.to, pj.t_move_start, pj.t_move_end}, true, thr);
          } else {
            hit = check_pair(i, m, j, {parked[j], parked[j], ev.t, ev.t}, false, thr);
          }
        }
        if (hit) {
          trace.violations.push_back(*hit);
          if (options.halt_on_collision) {
            trace.halted = true;
            queue = {};
          }
        }
        break;
      }
      case EventKind::kMoveEnd:
        parked[i] = act.to;
        moving[i].reset();
        e.to = act.to;
        trace.events.push_back(e);
        break;
      default:
        break;
    }
  }

  if (trace.halted) {
    trace.horizon = trace.events.back().t;
  } else {
    trace.horizon = horizon;
    if (!trace.events.empty()) trace.horizon = std::max(horizon, trace.events.back().t);
    for (std::size_t i = 0; i < n; ++i)
      if (!ever_active[i])
        trace.violations.push_back({ViolationKind::kStarvation, trace.horizon, {i}, parked[i],
                                    std::nullopt, "robot never activated"});
  }
  trace.final = Configuration{};
  for (std::size_t i = 0; i < n; ++i) trace.final.robots.push_back({position(i, trace.horizon), light[i]});
  for (const auto& mon : options.monitors) {
    auto extra = mon(trace);
    trace.violations.insert(trace.violations.end(), extra.begin(), extra.end());
  }
  std::stable_sort(trace.violations.begin(), trace.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.t < b.t; });
  return trace;
}

/// Replays the trace up to and including every event at time <= t.
inline Configuration configuration_at(const Trace& trace, double t) {
  const std::size_t n = trace.size();
  std::vector<Point> parked = trace.initial.positions();
  std::vector<Color> light(n, kOff);
  for (std::size_t i = 0; i < n; ++i) light[i] = trace.initial.robots[i].light;
  std::vector<std::optional<MoveSegment>> moving(n);
  for (const auto& e : trace.events) {
    if (e.t > t) break;
    if (!e.robot) continue;
    std::size_t i = *e.robot;
    switch (e.kind) {
      case EventKind::kLight: light[i] = e.color; break;
      case EventKind::kMoveStart: moving[i] = MoveSegment{e.from, e.to, e.t, e.t_end}; break;
      case EventKind::kMoveEnd:
        parked[i] = e.to;
        moving[i].reset();
        break;
      default: break;
    }
  }
  Configuration c;
  for (std::size_t i = 0; i < n; ++i) c.robots.push_back({moving[i] ? moving[i]->at(t) : parked[i], light[i]});
  return c;
}

/// One robot's motion as consecutive pieces covering [0, horizon]; parked pieces have from == to.
inline std::vector<std::vector<MoveSegment>> timelines(const Trace& trace) {
  const std::size_t n = trace.size();
  std::vector<std::vector<MoveSegment>> out(n);
  std::vector<Point> at = trace.initial.positions();
  std::vector<double> since(n, 0.0);
  for (const auto& e : trace.events) {
    if (!e.robot || e.kind != EventKind::kMoveStart) continue;
    std::size_t i = *e.robot;
    if (e.t > since[i]) out[i].push_back({at[i], at[i], since[i], e.t});
    out[i].push_back({e.from, e.to, e.t, e.t_end});
    at[i] = e.to;
    since[i] = e.t_end;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i].push_back({at[i], at[i], since[i], std::max(since[i], trace.horizon)});
  return out;
}

/// Offline re-check of collision intolerance from the trace alone.
inline std::vector<Violation> collision_monitor(const Trace& trace, const Tolerance& tol = {}) {
  auto lines = timelines(trace);
  const std::size_t n = lines.size();
  std::vector<Violation> out;
  auto position = [&](std::size_t j, double t) {
    for (const auto& seg : lines[j])
      if (t < seg.t_end || (seg.t_start == seg.t_end && t == seg.t_start)) return seg.at(t);
    return lines[j].back().to;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& m : lines[i]) {
      if (m.null()) continue;
      std::vector<Point> now(n);
      for (std::size_t j = 0; j < n; ++j) now[j] = position(j, m.t_start);
      now[i] = m.from;
      const double thr = tol.at(diameter(now));
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        for (const auto& o : lines[j]) {
          bool overlaps = o.t_start < m.t_end && o.t_end > m.t_start;
          bool simultaneous = o.t_start == m.t_start;
          if (!overlaps && !simultaneous) continue;
          if (!o.null()) {
            // Each moving pair is examined once, from the later-starting move.
            if (o.t_start > m.t_start || (o.t_start == m.t_start && j < i)) continue;
            if (auto v = check_pair(i, m, j, o, true, thr)) out.push_back(*v);
          } else if (overlaps) {
            if (auto v = check_pair(i, m, j, o, false, thr)) out.push_back(*v);
          }
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.t, a.robots) < std::tie(b.t, b.robots);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Removes from a transparent snapshot every entry hidden from the observer.
inline Snapshot filter_snapshot(const Snapshot& full, Point observer = {0.0, 0.0}, const Tolerance& tol = {}) {
  Snapshot out;
  out.own_internal = full.own_internal;
  out.transparent_mode = false;
  for (std::size_t j = 0; j < full.visible.size(); ++j) {
    bool hidden = false;
    for (std::size_t k = 0; k < full.visible.size() && !hidden; ++k)
      if (k != j && blocks(observer, full.visible[j].position, full.visible[k].position, tol)) hidden = true;
    if (!hidden) out.visible.push_back(full.visible[j]);
  }
  return out;
}

struct VisibilityGap {
  double t = 0.0;
  std::size_t robot = 0;
  std::size_t visible = 0;
};

/// First look that did not see all k - 1 other robots.
inline std::optional<VisibilityGap> visibility_audit(const Trace& trace, std::size_t k) {
  for (const auto& e : trace.events)
    if (e.kind == EventKind::kLook && e.robot && e.visible + 1 != k) return VisibilityGap{e.t, *e.robot, e.visible};
  return std::nullopt;
}

}  // namespace opaque_swarm
