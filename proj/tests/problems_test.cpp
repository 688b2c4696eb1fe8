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

#include <gtest/gtest.h>

#include "opaque_swarm/algos.hpp"
#include "opaque_swarm/problems.hpp"

namespace opaque_swarm {
namespace {

double deg(double d) { return d * kPi / 180.0; }

struct Move {
  std::size_t robot;
  Point to;
  double t0, t1;
};

/// Trace of the given moves, one at a time from the spec's initial configuration.
Trace scripted(const ProblemSpec& spec, const std::vector<Move>& moves, double horizon = 100) {
  Trace t;
  t.horizon = horizon;
  t.initial = spec.initial;
  auto pos = spec.initial.positions();
  for (const auto& m : moves) {
    TraceEvent s;
    s.t = m.t0;
    s.kind = EventKind::kMoveStart;
    s.robot = m.robot;
    s.from = pos[m.robot];
    s.to = m.to;
    s.t_end = m.t1;
    TraceEvent e;
    e.t = m.t1;
    e.kind = EventKind::kMoveEnd;
    e.robot = m.robot;
    e.to = m.to;
    t.events.push_back(s);
    t.events.push_back(e);
    pos[m.robot] = m.to;
  }
  t.final = Configuration::from_points(pos);
  return t;
}

bool has_kind(const MonitorResult& m, ViolationKind k) {
  return std::any_of(m.violations.begin(), m.violations.end(), [k](const Violation& v) { return v.kind == k; });
}

TEST(TriangleRoundTrip, EmptyVertexTarget) {
  auto spec = triangle_round_trip_spec(1.0);
  EXPECT_NEAR(dist(spec.point("a"), polar(1, deg(330))), 0.0, 1e-12);
  EXPECT_NEAR(dist(spec.point("center"), {0, 0}), 0.0, 1e-12);
}

TEST(TriangleRoundTrip, HalfwayStopDoesNotAdvance) {
  auto spec = triangle_round_trip_spec(1.0);
  auto m = monitor(spec, scripted(spec, {{spec.role("mover"), 0.5 * spec.point("a"), 1, 2}}));
  EXPECT_EQ(m.progress.phases_completed, 0u);
}

TEST(TriangleRoundTrip, ThereAndBackCompletesBothPhases) {
  auto spec = triangle_round_trip_spec(1.0);
  const auto mv = spec.role("mover");
  auto m = monitor(spec, scripted(spec, {{mv, spec.point("a"), 1, 2}, {mv, {0, 0}, 3, 4}}));
  EXPECT_EQ(m.progress.phases_completed, 2u);
  EXPECT_TRUE(m.progress.finished);
  EXPECT_TRUE(m.clean());
}

TEST(TriangleRoundTrip, VertexMoveViolatesStillness) {
  auto spec = triangle_round_trip_spec(1.0);
  auto m = monitor(spec, scripted(spec, {{spec.role("p"), {0, 1.5}, 1, 2}}));
  EXPECT_TRUE(has_kind(m, ViolationKind::kPathConstraint));
}

TEST(FlipFlopFlip, FigureInstance) {
  auto spec = flip_flop_flip_spec(2.6, 1.0);
  EXPECT_EQ(spec.initial.robots[spec.role("r")].position, (Point{2.6, 0}));
  EXPECT_TRUE(spec.perpetual);
}

TEST(FlipFlopFlip, EquilateralStartRejected) {
  EXPECT_THROW(flip_flop_flip_spec(std::sqrt(3.0), 1.0), InstanceError);
}

TEST(FlipFlopFlip, FlipAvoidsEquilateralPoint) {
  auto spec = flip_flop_flip_spec();
  const auto r = spec.role("r");
  EXPECT_TRUE(monitor(spec, scripted(spec, {{r, {-1.0, 0}, 1, 2}})).clean());
  EXPECT_EQ(monitor(spec, scripted(spec, {{r, {-1.0, 0}, 1, 2}})).progress.phases_completed, 1u);
  auto bad = monitor(spec, scripted(spec, {{r, {-std::sqrt(3.0), 0}, 1, 2}}));
  EXPECT_FALSE(bad.clean());
  EXPECT_EQ(bad.progress.phases_completed, 0u);
}

TEST(FlipFlopFlip, StopAtMidpointViolates) {
  auto spec = flip_flop_flip_spec();
  auto m = monitor(spec, scripted(spec, {{spec.role("r"), {0, 0}, 1, 2}}));
  EXPECT_FALSE(m.clean());
}

TEST(FlipFlopFlip, FlopMustMoveAway) {
  auto spec = flip_flop_flip_spec();
  const auto r = spec.role("r");
  auto m = monitor(spec, scripted(spec, {{r, {-3, 0}, 1, 2}, {r, {-1, 0}, 3, 4}}));
  EXPECT_EQ(m.progress.phases_completed, 1u);
  EXPECT_FALSE(m.clean());
}

TEST(FlipFlopFlip, FullCycle) {
  auto spec = flip_flop_flip_spec();
  const auto r = spec.role("r");
  auto m = monitor(spec, scripted(spec, {{r, {-1, 0}, 1, 2}, {r, {-3, 0}, 3, 4}, {r, {2.6, 0}, 5, 6}}));
  EXPECT_EQ(m.progress.cycles, 1u);
  EXPECT_TRUE(m.clean());
}

TEST(Newcomer, GeneratedInstanceIsValid) {
  auto spec = newcomer_spec(7, 2.0, 3);
  EXPECT_TRUE(phi0(spec, spec.initial));
  auto pts = spec.initial.positions();
  const Point s = pts[spec.role("s")], c = pts[spec.role("c")];
  for (std::size_t j = 0; j < pts.size(); ++j)
    if (j != spec.role("s") && j != spec.role("c")) {
      EXPECT_FALSE(blocks(s, c, pts[j]));
    }
}

TEST(Newcomer, BlockedSightRejected) {
  std::vector<Point> pts;
  for (int k = 0; k < 7; ++k) pts.push_back(polar(2.0, deg(10 + 51.0 * k + k * k)));
  pts.push_back({0, 0});
  pts.push_back(3.6 * unit(pts[0]));
  EXPECT_THROW(newcomer_from(Configuration::from_points(pts)), InstanceError);
}

TEST(Newcomer, AlgorithmReachesHalfRadius) {
  auto spec = newcomer_spec(7, 2.0, 1);
  NwcFcom alg;
  auto sched = generate(parse_schedule_spec("async:seed=4", 600), spec.initial.size());
  auto trace = run({LightClass::kFcom, SyncMode::kAsync}, alg, spec.initial, sched, 600, false, 4);
  auto m = monitor(spec, trace);
  EXPECT_EQ(m.progress.phases_completed, 2u);
  EXPECT_TRUE(m.clean());
  EXPECT_NEAR(dist(trace.final.robots[spec.role("s")].position, trace.final.robots[spec.role("c")].position), 1.0,
              1e-9);
}

TEST(Newcomer, CircleRobotMoveViolates) {
  auto spec = newcomer_spec(7, 2.0, 1);
  std::size_t circle = 0;
  while (circle == spec.role("s") || circle == spec.role("c")) ++circle;
  Point p = spec.initial.robots[circle].position;
  auto m = monitor(spec, scripted(spec, {{circle, 1.1 * p, 1, 2}}));
  EXPECT_TRUE(has_kind(m, ViolationKind::kPathConstraint));
}

TEST(Spinning, FigureTargets) {
  auto spec = make_problem("spi", {{"figure", 1}});
  EXPECT_NEAR(spec.params.at("alpha"), deg(20), 1e-12);
  const Point O = spec.point("center");
  const int orient = static_cast<int>(spec.params.at("orientation"));
  std::vector<double> want{10, 30, 70, 110, 210, 290};
  for (std::size_t i = 0; i < 6; ++i) {
    Point t = rotate_about(spec.initial.robots[i].position, O, deg(10), orient);
    EXPECT_NEAR(dist(t, polar(1, deg(want[i]))), 0.0, 1e-12);
  }
}

TEST(Spinning, RotationPreservesGaps) {
  auto spec = make_problem("spi", {{"figure", 1}});
  std::vector<Point> rotated;
  for (const auto& r : spec.initial.robots) rotated.push_back(rotate_about(r.position, {0, 0}, deg(10), +1));
  auto ord = angular_order(rotated, {0, 0});
  EXPECT_NEAR(ord.min_gap, deg(20), 1e-12);
  EXPECT_FALSE(ord.ambiguous);
}

TEST(Spinning, OffCircleStopViolates) {
  auto spec = make_problem("spi", {{"figure", 1}});
  Point p = spec.initial.robots[3].position;
  auto m = monitor(spec, scripted(spec, {{3, 0.9 * p, 1, 2}}));
  EXPECT_FALSE(m.clean());
}

TEST(Spinning, SymmetricGapsRejected) {
  EXPECT_THROW(spinning_spec_from_angles({0, 60, 120, 180, 240, 300}), InstanceError);
  EXPECT_THROW(spinning_spec_from_angles({0, 20, 40, 140, 240}), InstanceError);
}

TEST(AngleShift, FigureTargets) {
  auto spec = angle_shift_spec(80, 2, 3);
  EXPECT_EQ(spec.role("a"), 0u);
  EXPECT_NEAR(dist(spec.point("b_target"), polar(2, deg(80))), 0.0, 1e-12);
  EXPECT_NEAR(dist(spec.point("c_target"), {-3, 0}), 0.0, 1e-12);
}

TEST(AngleShift, FinalTriangleIsObtuse) {
  auto spec = angle_shift_spec(80, 2, 3);
  const Point a{0, 0}, b = spec.point("b_target"), c = spec.point("c_target");
  EXPECT_LT(dot(b - a, c - a), 0.0);
}

TEST(AngleShift, OnlyBMovingLeavesCollinearTriple) {
  auto spec = angle_shift_spec(80, 2, 3);
  EXPECT_TRUE(collinear({0, 0}, spec.point("b_target"), spec.initial.robots[spec.role("c")].position));
}

TEST(AngleShift, RejectsRightObtuseIsosceles) {
  auto make = [](std::vector<Point> p) { return angle_shift_from(Configuration::from_points(p)); };
  EXPECT_THROW(make({{0, 0}, {2, 0}, {0, 3}}), InstanceError);
  EXPECT_THROW(make({{0, 0}, {4, 0}, {-1, 1}}), InstanceError);
  EXPECT_THROW(make({{0, 0}, {2, 0}, {1, 1.2}}), InstanceError);
}

TEST(Pseudo, OctagonRoles) {
  auto spec = pseudo_octagon_spec();
  const Point a = spec.initial.robots[spec.role("a")].position;
  EXPECT_NEAR(dist(a, polar(1, deg(67.5))), 0.0, 1e-12);
  const Point w = spec.initial.robots[spec.role("w")].position;
  double da = dist(a, w);
  for (std::size_t i = 0; i < spec.initial.size(); ++i)
    if (i != spec.role("a") && i != spec.role("w")) {
      EXPECT_LT(dist(spec.initial.robots[i].position, w), da);
    }
  EXPECT_GT(dist(spec.initial.robots[spec.role("b")].position, w),
            dist(spec.initial.robots[spec.role("c")].position, w));
}

TEST(Pseudo, TargetConditions) {
  auto spec = pseudo_octagon_spec();
  auto pts = spec.initial.positions();
  auto roles = pseudo_roles(pts);
  ASSERT_TRUE(roles);
  EXPECT_FALSE(pseudo_target_ok(*roles, pts, {0.1, 0.1}));
  const Point w = pts[roles->w];
  const Point on_line = w + 3.0 * (pts[roles->b] - w);
  EXPECT_FALSE(pseudo_target_ok(*roles, pts, on_line));
  auto x = algo::pseudo_destination(*roles, pts);
  ASSERT_TRUE(x);
  EXPECT_TRUE(pseudo_target_ok(*roles, pts, *x));
}

TEST(Pseudo, GeneratedInstancesRecoverPolygon) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (std::size_t n : {6, 8, 10}) {
      auto spec = pseudo_spec(n, n / 2 + 2, seed);
      auto pts = spec.initial.positions();
      std::vector<Point> members;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (i != spec.role("w")) members.push_back(pts[i]);
      auto poly = associated_polygon(members).polygon;
      EXPECT_EQ(poly.n, static_cast<int>(n));
      EXPECT_TRUE(safe_zone_contains(poly, pts[spec.role("w")]));
      EXPECT_TRUE(phi0(spec, spec.initial));
    }
  }
}

TEST(LineStretch, Targets) {
  auto s4 = line_stretch_spec(4, 1.0);
  EXPECT_NEAR(dist(s4.point("left_target"), {-0.25, 0}), 0.0, 1e-15);
  EXPECT_NEAR(dist(s4.point("right_target"), {3.25, 0}), 0.0, 1e-15);
  auto s5 = line_stretch_spec(5, 2.0);
  EXPECT_NEAR(dist(s5.point("right_target"), s5.initial.robots[3].position), 2.4, 1e-12);
  EXPECT_THROW(line_stretch_spec(3, 1.0), InstanceError);
}

TEST(LineStretch, InternalMoveViolates) {
  auto spec = line_stretch_spec(5, 1.0);
  auto m = monitor(spec, scripted(spec, {{2, {2, 0.5}, 1, 2}}));
  EXPECT_TRUE(has_kind(m, ViolationKind::kPathConstraint));
}

TEST(Monitor, EmptyTraceOnFiniteProblem) {
  auto spec = triangle_round_trip_spec();
  auto m = monitor(spec, scripted(spec, {}));
  EXPECT_EQ(m.progress.phases_completed, 0u);
  EXPECT_TRUE(m.clean());
  EXPECT_FALSE(m.satisfied(spec));
}

TEST(Generators, SeedDeterministicAndValid) {
  for (const auto& info : problem_list()) {
    for (double seed : {1.0, 2.0, 7.0}) {
      auto a = make_problem(info.name, {{"seed", seed}});
      auto b = make_problem(info.name, {{"seed", seed}});
      EXPECT_EQ(a.initial, b.initial) << info.name;
      EXPECT_TRUE(phi0(a, a.initial)) << info.name;
    }
  }
}

TEST(Instances, JsonRoundTrip) {
  for (const auto& info : problem_list()) {
    auto spec = make_problem(info.name, {{"seed", 3}});
    auto back = problem_from_json(instance_json(spec));
    EXPECT_EQ(back.name, spec.name);
    EXPECT_EQ(back.roles, spec.roles);
    EXPECT_EQ(back.initial, spec.initial);
  }
}

}  // namespace
}  // namespace opaque_swarm
