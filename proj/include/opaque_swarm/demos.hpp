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

// Fixed counterexample executions. Each demo embeds its instance and schedule,
// runs it and reports whether the expected failure was observed.

#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "opaque_swarm/adversary.hpp"
#include "opaque_swarm/algos.hpp"
#include "opaque_swarm/problems.hpp"

namespace opaque_swarm {

struct DemoReport {
  std::string name;
  /// True when the documented failure occurred.
  bool reproduced = false;
  std::string headline;
  std::vector<std::string> details;
  /// Main execution, when the demo has one.
  std::optional<Trace> trace;
  /// Monitor violations of the main execution.
  std::vector<Violation> violations;
};

namespace demo_detail {

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

inline std::string fmt(Point p) { return "(" + fmt(p.x) + ", " + fmt(p.y) + ")"; }

inline std::vector<ActivationSet> all_rounds(std::size_t n, std::size_t rounds) {
  ActivationSet all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return std::vector<ActivationSet>(rounds, all);
}

inline std::vector<Violation> all_violations(const ProblemSpec& spec, const Trace& trace) {
  auto v = trace.violations;
  auto m = monitor(spec, trace);
  v.insert(v.end(), m.violations.begin(), m.violations.end());
  return v;
}

inline std::vector<Point> moves_of(const Trace& trace, std::size_t robot) {
  std::vector<Point> out;
  for (const auto& e : trace.events)
    if (e.kind == EventKind::kMoveStart && e.robot == robot && e.from != e.to) out.push_back(e.to);
  return out;
}

inline void list_violations(DemoReport& rep, std::size_t limit = 4) {
  for (std::size_t k = 0; k < rep.violations.size() && k < limit; ++k) {
    const auto& v = rep.violations[k];
    rep.details.push_back(std::string(to_string(v.kind)) + " at t=" + fmt(v.t) + ": " + v.details);
  }
  if (rep.violations.size() > limit)
    rep.details.push_back("... " + std::to_string(rep.violations.size() - limit) + " more violations");
}

}  // namespace demo_detail

/// The FCOM FSYNC FlipFlopFlip algorithm under SSYNC: r is activated alone twice
/// and flips again before p and q can advance the shared phase.
inline DemoReport demo_fff_ssync_break() {
  using namespace demo_detail;
  DemoReport rep;
  rep.name = "fff-ssync-break";
  const auto spec = flip_flop_flip_spec();
  const auto alg = make_algorithm("fff_fcom_fsync");
  const std::size_t r = spec.role("r"), n = spec.initial.size();
  const Schedule base{SyncMode::kFsync, all_rounds(n, 6), {}};
  auto adv = double_activation_adversary(*alg, LightClass::kFcom, spec.initial, base, r, all_rounds(n, 6));
  const ModelId model{LightClass::kFcom, SyncMode::kSsync};
  auto trace = run(model, *alg, spec.initial, adv.schedule, static_cast<double>(adv.schedule.rounds.size()), false, 0);
  rep.violations = all_violations(spec, trace);
  auto moves = moves_of(trace, r);
  for (const auto& v : rep.violations)
    if (v.kind == ViolationKind::kPathConstraint || v.kind == ViolationKind::kPhaseRegression) {
      rep.reproduced = true;
      rep.headline = std::string(to_string(v.kind)) + " at t=" + fmt(v.t) + ": r flips again in round " +
                     std::to_string(adv.trigger_round + 1);
      break;
    }
  if (!rep.reproduced) rep.headline = "no path violation observed";
  rep.details.push_back("model " + to_string(model) + ", r = robot " + std::to_string(r) +
                        " activated alone in rounds " + std::to_string(adv.trigger_round) + " and " +
                        std::to_string(adv.trigger_round + 1));
  for (std::size_t k = 0; k < moves.size() && k < 3; ++k)
    rep.details.push_back("r move " + std::to_string(k + 1) + " -> " + fmt(moves[k]));
  list_violations(rep);
  rep.trace = std::move(trace);
  return rep;
}

/// The OBLOT FSYNC Spinning algorithm under SSYNC: r0 is activated alone twice
/// and rotates a second time from a configuration whose minimal gap has changed.
inline DemoReport demo_spinning_double_activation() {
  using namespace demo_detail;
  DemoReport rep;
  rep.name = "spinning-double-activation";
  const auto spec = make_problem("spi", {{"figure", 1}});
  const auto alg = make_algorithm("spi_oblot_fsync");
  const std::size_t r0 = spec.role("r0"), n = spec.initial.size();
  const Point O = spec.point("center");
  const double alpha = spec.params.at("alpha");
  const int orient = static_cast<int>(spec.params.at("orientation"));
  const Schedule base{SyncMode::kFsync, all_rounds(n, 4), {}};
  auto adv = double_activation_adversary(*alg, LightClass::kOblot, spec.initial, base, r0, all_rounds(n, 4));
  const ModelId model{LightClass::kOblot, SyncMode::kSsync};
  auto trace = run(model, *alg, spec.initial, adv.schedule, static_cast<double>(adv.schedule.rounds.size()), false, 0);
  rep.violations = all_violations(spec, trace);
  auto start = configuration_at(trace, static_cast<double>(adv.trigger_round)).robots[r0].position;
  auto after = configuration_at(trace, static_cast<double>(adv.trigger_round + 2)).robots[r0].position;
  const Point u = start - O, v = after - O;
  const double swept = orient * std::atan2(cross(u, v), dot(u, v));
  const bool double_move = std::abs(swept - alpha / 2) > 1e-6 && std::abs(swept) > 1e-6;
  bool flagged = false;
  for (const auto& v : rep.violations) flagged = flagged || v.kind == ViolationKind::kPathConstraint;
  rep.reproduced = double_move && flagged;
  rep.headline = "r0 rotated by " + fmt(swept * 180 / kPi) + " deg over two solo activations (alpha/2 = " +
                 fmt(alpha * 90 / kPi) + " deg)";
  rep.details.push_back("model " + to_string(model) + ", r0 = robot " + std::to_string(r0) + ", trigger round " +
                        std::to_string(adv.trigger_round));
  list_violations(rep);
  rep.trace = std::move(trace);
  return rep;
}

/// The geometry-only Pseudo algorithm under ASYNC with internal lights: b looks
/// exactly when the moving a is hidden behind c, elects itself and moves too.
inline DemoReport demo_pseudo_false_election() {
  using namespace demo_detail;
  DemoReport rep;
  rep.name = "pseudo-false-election";
  const auto spec = make_problem("pse", {{"figure", 1}});
  const auto alg = make_algorithm("pse_internal_only");
  const ModelId model{LightClass::kFsta, SyncMode::kAsync};
  const std::size_t a = spec.role("a"), b = spec.role("b"), c = spec.role("c"), n = spec.initial.size();
  const auto pts = spec.initial.positions();
  const double a_start = 0.5, a_end = 10.5, late = 40.0;
  auto schedule_with = [&](double b_look) {
    Schedule s{SyncMode::kAsync, {}, {}};
    s.activations.push_back({a, 0.0, a_start, a_end});
    s.activations.push_back({b, b_look, b_look + 0.01, b_look + 5.0});
    for (std::size_t i = 0; i < n; ++i)
      if (i != a && i != b) s.activations.push_back({i, late + static_cast<double>(i), late + i + 0.1, late + i + 0.2});
    std::sort(s.activations.begin(), s.activations.end(),
              [](const auto& x, const auto& y) { return std::tie(x.t_look, x.robot) < std::tie(y.t_look, y.robot); });
    return s;
  };
  auto dry = run(model, *alg, spec.initial, schedule_with(late - 1.0), late + 10.0, false, 0);
  auto target = moves_of(dry, a);
  if (target.empty()) {
    rep.headline = "a never moved";
    return rep;
  }
  auto t_hide = collinearity_timed_look(pts[a], target.front(), a_start, a_end, pts[b], pts[c]);
  if (!t_hide) {
    rep.headline = "a's path never passes behind c";
    return rep;
  }
  auto trace = run(model, *alg, spec.initial, schedule_with(*t_hide), late + 10.0, false, 0);
  rep.violations = all_violations(spec, trace);
  auto b_moves = moves_of(trace, b);
  const bool concurrent = !b_moves.empty() && *t_hide + 0.01 < a_end;
  bool flagged = false;
  for (const auto& v : rep.violations) flagged = flagged || v.kind == ViolationKind::kPathConstraint;
  rep.reproduced = concurrent && flagged;
  rep.headline = concurrent ? "two robots moving concurrently at t=" + fmt(*t_hide + 0.01) + " (a and b)"
                            : "b did not move";
  rep.details.push_back("model " + to_string(model) + ", a = robot " + std::to_string(a) + ", b = robot " +
                        std::to_string(b) + ", c = robot " + std::to_string(c));
  rep.details.push_back("a moves " + fmt(pts[a]) + " -> " + fmt(target.front()) + " during [" + fmt(a_start) +
                        ", " + fmt(a_end) + "]");
  rep.details.push_back("b looks at t=" + fmt(*t_hide) + " with b, c, a collinear");
  for (const auto& e : trace.events)
    if (e.kind == EventKind::kLook && e.robot == b)
      rep.details.push_back("b sees " + std::to_string(e.visible) + " of " + std::to_string(n - 1) + " robots");
  if (!b_moves.empty()) rep.details.push_back("b elects itself and heads to " + fmt(b_moves.front()));
  list_violations(rep);
  rep.trace = std::move(trace);
  return rep;
}

/// The OBLOT FSYNC AngleShift algorithm under SSYNC: only b is activated, lands
/// on line(a, c), and the angle at a can no longer be recovered.
inline DemoReport demo_angleshift_ssync_loss() {
  using namespace demo_detail;
  DemoReport rep;
  rep.name = "angleshift-ssync-loss";
  const auto spec = angle_shift_spec();
  const auto alg = make_algorithm("ash_oblot_fsync");
  const ModelId model{LightClass::kOblot, SyncMode::kSsync};
  const std::size_t a = spec.role("a"), b = spec.role("b"), c = spec.role("c"), n = spec.initial.size();
  Schedule s{SyncMode::kSsync, {{b}}, {}};
  auto rest = all_rounds(n, 4);
  s.rounds.insert(s.rounds.end(), rest.begin(), rest.end());
  auto trace = run(model, *alg, spec.initial, s, static_cast<double>(s.rounds.size()), false, 0);
  rep.violations = all_violations(spec, trace);
  const auto after = configuration_at(trace, 1.0).positions();
  const bool line = collinear(after[a], after[b], after[c]);
  const bool lost = !angle_shift_roles(after).has_value();
  const auto m = monitor(spec, trace);
  rep.reproduced = line && lost && !m.satisfied(spec);
  rep.headline = line ? "a, b', c collinear after round 0; angle at a not recoverable"
                      : "b did not land on line(a, c)";
  rep.details.push_back("model " + to_string(model) + ", only b = robot " + std::to_string(b) + " active in round 0");
  rep.details.push_back("b' = " + fmt(after[b]) + ", line distance " +
                        fmt(line_distance(after[a], after[c], after[b])));
  rep.details.push_back(std::string("final configuration reached: ") + (m.satisfied(spec) ? "yes" : "no"));
  list_violations(rep);
  rep.trace = std::move(trace);
  return rep;
}

/// The transparent LineStretch algorithm with opaque robots: each endpoint sees a
/// single neighbor on a line of n robots.
inline DemoReport demo_linestretch_opacity() {
  using namespace demo_detail;
  DemoReport rep;
  rep.name = "linestretch-opacity";
  const auto alg = make_algorithm("ls_oblot_transparent");
  const ModelId model{LightClass::kOblot, SyncMode::kAsync};
  bool all = true;
  for (std::size_t n = 4; n <= 10; ++n) {
    auto spec = line_stretch_spec(n);
    ScheduleSpec ss;
    ss.mode = SyncMode::kAsync;
    ss.generator = GeneratorKind::kAsyncRandom;
    ss.seed = n;
    ss.horizon = 60;
    auto trace = run(model, *alg, spec.initial, generate(ss, n), 60, false, n);
    auto gap = visibility_audit(trace, n);
    std::size_t endpoint_seen = 0;
    bool any = false;
    for (const auto& e : trace.events)
      if (e.kind == EventKind::kLook && e.robot && (*e.robot == 0 || *e.robot == n - 1)) {
        endpoint_seen = any ? std::max(endpoint_seen, e.visible) : e.visible;
        any = true;
      }
    const bool ok = gap.has_value() && any && endpoint_seen == 1;
    all = all && ok;
    rep.details.push_back("n=" + std::to_string(n) + ": endpoint snapshot cardinality " +
                          std::to_string(endpoint_seen) + " of " + std::to_string(n - 1) +
                          (gap ? ", first gap at t=" + fmt(gap->t) : ", no gap"));
    if (n == 4) {
      rep.violations = all_violations(spec, trace);
      rep.trace = std::move(trace);
    }
  }
  rep.reproduced = all;
  rep.headline = all ? "visibility audit failed for every n in 4..10: endpoints see 1 robot"
                     : "some endpoint saw more than one robot";
  return rep;
}

struct DemoInfo {
  std::string name;
  std::function<DemoReport()> run;
};

inline const std::vector<DemoInfo>& demo_list() {
  static const std::vector<DemoInfo> demos{
      {"fff-ssync-break", demo_fff_ssync_break},
      {"spinning-double-activation", demo_spinning_double_activation},
      {"pseudo-false-election", demo_pseudo_false_election},
      {"angleshift-ssync-loss", demo_angleshift_ssync_loss},
      {"linestretch-opacity", demo_linestretch_opacity},
  };
  return demos;
}

}  // namespace opaque_swarm
