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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "opaque_swarm/algos.hpp"
#include "opaque_swarm/experiment.hpp"

namespace opaque_swarm {
namespace {

double deg(double d) { return d * kPi / 180.0; }

const ModelId kLumiA{LightClass::kLumi, SyncMode::kAsync};

/// Snapshot of `observer` in a translation-only frame, with LUMI visibility of lights.
Snapshot view(const std::vector<Point>& pts, std::size_t observer, std::vector<Color> lights = {},
              ModelId model = kLumiA, bool transparent = false) {
  if (lights.empty()) lights.assign(pts.size(), kOff);
  return take_snapshot(pts, lights, observer, LocalFrame{0, false, 1, pts[observer]}, model, transparent);
}

Point global(const std::vector<Point>& pts, std::size_t observer, const Decision& d) {
  return pts[observer] + d.destination;
}

bool is_null(const Decision& d) { return norm(d.destination) == 0.0; }

TEST(TrtFsta, MoverGoesToEmptyVertex) {
  auto spec = triangle_round_trip_spec(1.0);
  auto pts = spec.initial.positions();
  const auto mv = spec.role("mover");
  auto snap = view(pts, mv, {}, {LightClass::kFsta, SyncMode::kAsync});
  auto d = TrtFsta().decide(snap);
  Point p = snap.visible[0].position, q = snap.visible[1].position;
  EXPECT_NEAR(dist(d.destination, -1.0 * (p + q)), 0.0, 1e-12);
  EXPECT_NEAR(dist(global(pts, mv, d), spec.point("a")), 0.0, 1e-12);
  EXPECT_EQ(d.color, std::optional<Color>("went"));
}

TEST(TrtFsta, VertexMidPhaseIsNull) {
  auto spec = triangle_round_trip_spec(1.0);
  auto pts = spec.initial.positions();
  pts[spec.role("mover")] = 0.4 * spec.point("a");
  EXPECT_TRUE(is_null(TrtFsta().decide(view(pts, spec.role("p"), {}, {LightClass::kFsta, SyncMode::kAsync}))));
}

TEST(TrtFcom, AcknowledgeThenReturn) {
  auto spec = triangle_round_trip_spec(1.0);
  auto pts = spec.initial.positions();
  const auto mv = spec.role("mover"), p = spec.role("p");
  pts[mv] = spec.point("a");
  std::vector<Color> lights(3, kOff);
  lights[mv] = "M";
  auto ack = TrtFcom().decide(view(pts, p, lights, {LightClass::kFcom, SyncMode::kAsync}));
  EXPECT_TRUE(is_null(ack));
  EXPECT_EQ(ack.color, std::optional<Color>("B"));
  lights[spec.role("p")] = lights[spec.role("q")] = "B";
  auto back = TrtFcom().decide(view(pts, mv, lights, {LightClass::kFcom, SyncMode::kAsync}));
  EXPECT_NEAR(dist(global(pts, mv, back), {0, 0}), 0.0, 1e-12);
}

TEST(FffFsta, SchemeAdvances) {
  auto spec = flip_flop_flip_spec();
  auto pts = spec.initial.positions();
  const auto r = spec.role("r");
  const ModelId m{LightClass::kFsta, SyncMode::kAsync};
  FffFsta alg;
  std::vector<Color> lights(3, kOff);
  auto flip = alg.decide(view(pts, r, lights, m));
  EXPECT_EQ(flip.color, std::optional<Color>("flop"));
  Point x1 = global(pts, r, flip);
  EXPECT_NEAR(x1.y, 0.0, 1e-12);
  EXPECT_LT(x1.x, 0.0);
  EXPECT_GT(std::abs(std::abs(x1.x) - std::sqrt(3.0)), 1e-3);

  pts[r] = x1;
  lights[r] = "flop";
  auto flop = alg.decide(view(pts, r, lights, m));
  EXPECT_EQ(flop.color, std::optional<Color>("flip2"));
  Point x2 = global(pts, r, flop);
  EXPECT_LT(x2.x, x1.x);
  EXPECT_NEAR(x2.y, 0.0, 1e-12);

  pts[r] = x2;
  lights[r] = "flip2";
  auto flip2 = alg.decide(view(pts, r, lights, m));
  EXPECT_EQ(flip2.color, std::optional<Color>("flip1"));
  EXPECT_GT(global(pts, r, flip2).x, 0.0);
}

TEST(FffFsta, BaseRobotsStay) {
  auto spec = flip_flop_flip_spec();
  auto pts = spec.initial.positions();
  EXPECT_TRUE(is_null(FffFsta().decide(view(pts, spec.role("p"), {}, {LightClass::kFsta, SyncMode::kAsync}))));
}

TEST(FffFcomFsync, RoundsFollowSharedColor) {
  auto spec = flip_flop_flip_spec();
  auto pts = spec.initial.positions();
  const auto r = spec.role("r");
  const ModelId m{LightClass::kFcom, SyncMode::kFsync};
  FffFcomFsync alg;
  auto d1 = alg.decide(view(pts, r, {kOff, kOff, kOff}, m));
  EXPECT_LT(global(pts, r, d1).x, 0.0);
  EXPECT_EQ(alg.decide(view(pts, spec.role("p"), {kOff, kOff, kOff}, m)).color, std::optional<Color>("flop"));
  pts[r] = global(pts, r, d1);
  auto d2 = alg.decide(view(pts, r, {"flop", "flop", "flop"}, m));
  EXPECT_LT(global(pts, r, d2).x, pts[r].x);
  pts[r] = global(pts, r, d2);
  auto d3 = alg.decide(view(pts, r, {"flip2", "flip2", "flip2"}, m));
  EXPECT_GT(global(pts, r, d3).x, 0.0);
  EXPECT_EQ(d3.color, std::optional<Color>("flip1"));
}

TEST(FffMemoryless, ThresholdRule) {
  // p = (0, 1), q = (0, -1): u = 2, so k u = 4 and h u = 8. Each flip crosses line(p, q), the flop does not.
  FffMemoryless alg;
  const Point p{0, 1};
  auto step = [&](double x) {
    std::vector<Point> pts{p, {0, -1}, {x, 0}};
    return global(pts, 2, alg.decide(view(pts, 2)));
  };
  Point first = step(2.6);
  EXPECT_LT(first.x, 0.0);
  EXPECT_GE(dist(p, first), 4.0 - 1e-9);
  EXPECT_LT(dist(p, first), 8.0);
  Point flop = step(std::sqrt(35.0));
  EXPECT_GT(flop.x, std::sqrt(35.0));
  EXPECT_GE(dist(p, flop), 8.0 - 1e-9);
  Point second = step(20.0);
  EXPECT_LT(second.x, 0.0);
  EXPECT_LT(dist(p, second), 4.0);
}

TEST(NwcFcom, NewcomerHeadsToBoundary) {
  auto spec = newcomer_spec();
  auto pts = spec.initial.positions();
  const ModelId m{LightClass::kFcom, SyncMode::kAsync};
  auto d = NwcFcom().decide(view(pts, spec.role("s"), {}, m));
  EXPECT_EQ(d.color, std::optional<Color>("s"));
  EXPECT_NEAR(dist(global(pts, spec.role("s"), d), spec.point("P")), 0.0, 1e-9);
}

TEST(NwcFcom, CenterWaitsForNewcomerOnCircle) {
  auto spec = newcomer_spec();
  auto pts = spec.initial.positions();
  const ModelId m{LightClass::kFcom, SyncMode::kAsync};
  std::vector<Color> lights(pts.size(), kOff);
  lights[spec.role("s")] = "s";
  pts[spec.role("s")] = 0.5 * (pts[spec.role("s")] + spec.point("P"));
  EXPECT_TRUE(is_null(NwcFcom().decide(view(pts, spec.role("c"), lights, m))));
  pts[spec.role("s")] = spec.point("P");
  auto d = NwcFcom().decide(view(pts, spec.role("c"), lights, m));
  EXPECT_NEAR(dist(global(pts, spec.role("c"), d), spec.point("target")), 0.0, 1e-9);
}

TEST(NwcFcom, CircleRobotStays) {
  auto spec = newcomer_spec();
  auto pts = spec.initial.positions();
  std::size_t i = 0;
  while (i == spec.role("s") || i == spec.role("c")) ++i;
  EXPECT_TRUE(is_null(NwcFcom().decide(view(pts, i, {}, {LightClass::kFcom, SyncMode::kAsync}))));
}

TEST(SpiOblotFsync, FigureRoundOne) {
  auto spec = make_problem("spi", {{"figure", 1}});
  auto pts = spec.initial.positions();
  const int orient = static_cast<int>(spec.params.at("orientation"));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto d = SpiOblotFsync().decide(view(pts, i, {}, {LightClass::kOblot, SyncMode::kFsync}));
    EXPECT_NEAR(dist(global(pts, i, d), rotate_about(pts[i], {0, 0}, deg(10), orient)), 0.0, 1e-9);
    EXPECT_FALSE(d.color);
  }
}

TEST(SpiLumiAsync, OffRobotSeeingBothMarkersRotates) {
  auto spec = make_problem("spi", {{"figure", 1}});
  auto pts = spec.initial.positions();
  const auto r0 = spec.role("r0"), r1 = spec.role("r1");
  const double alpha = spec.params.at("alpha");
  const int orient = static_cast<int>(spec.params.at("orientation"));
  std::vector<Color> lights(pts.size(), kOff);
  pts[r0] = rotate_about(pts[r0], {0, 0}, alpha / 2, orient);
  pts[r1] = rotate_about(pts[r1], {0, 0}, alpha / 2, orient);
  lights[r0] = "m0";
  lights[r1] = "m1";
  std::size_t i = 0;
  while (i == r0 || i == r1) ++i;
  auto d = SpiLumiAsync().decide(view(pts, i, lights));
  EXPECT_EQ(d.color, std::optional<Color>("moving"));
  EXPECT_NEAR(dist(global(pts, i, d), rotate_about(pts[i], {0, 0}, alpha / 2, orient)), 0.0, 1e-9);
}

TEST(SpiLumiAsync, LightTransitions) {
  auto spec = make_problem("spi", {{"figure", 1}});
  auto pts = spec.initial.positions();
  std::vector<Color> lights(pts.size(), kOff);
  lights[0] = "moving";
  auto d = SpiLumiAsync().decide(view(pts, 0, lights));
  EXPECT_TRUE(is_null(d));
  EXPECT_EQ(d.color, std::optional<Color>("moved"));
  std::fill(lights.begin(), lights.end(), "end");
  lights[1] = kOff;
  auto e = SpiLumiAsync().decide(view(pts, 0, lights));
  EXPECT_TRUE(is_null(e));
  EXPECT_EQ(e.color, std::optional<Color>(kOff));
}

TEST(AshOblotFsync, RoundOneAndTerminal) {
  auto spec = angle_shift_spec(80, 2, 3);
  auto pts = spec.initial.positions();
  const ModelId m{LightClass::kOblot, SyncMode::kFsync};
  AshOblotFsync alg;
  EXPECT_NEAR(dist(global(pts, spec.role("b"), alg.decide(view(pts, spec.role("b"), {}, m))), spec.point("b_target")),
              0.0, 1e-9);
  EXPECT_NEAR(dist(global(pts, spec.role("c"), alg.decide(view(pts, spec.role("c"), {}, m))), spec.point("c_target")),
              0.0, 1e-9);
  EXPECT_TRUE(is_null(alg.decide(view(pts, spec.role("a"), {}, m))));
  pts[spec.role("b")] = spec.point("b_target");
  pts[spec.role("c")] = spec.point("c_target");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(is_null(alg.decide(view(pts, i, {}, m))));
}

TEST(PseOblotSync, OnlyFarthestMoves) {
  auto spec = pseudo_octagon_spec();
  auto pts = spec.initial.positions();
  const ModelId m{LightClass::kOblot, SyncMode::kSsync};
  PseOblotSync alg;
  auto roles = pseudo_roles(pts);
  ASSERT_TRUE(roles);
  Point x = global(pts, spec.role("a"), alg.decide(view(pts, spec.role("a"), {}, m)));
  EXPECT_TRUE(pseudo_target_ok(*roles, pts, x));
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != spec.role("a")) {
      EXPECT_TRUE(is_null(alg.decide(view(pts, i, {}, m))));
    }
  pts[spec.role("a")] = x;
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_TRUE(is_null(alg.decide(view(pts, i, {}, m))));
}

TEST(PseFcomAsync, CaseAnalysis) {
  auto spec = pseudo_octagon_spec();
  auto pts = spec.initial.positions();
  const ModelId m{LightClass::kFcom, SyncMode::kAsync};
  PseFcomAsync alg;
  std::vector<Color> lights(pts.size(), "on");
  const auto a = spec.role("a"), b = spec.role("b");
  lights[a] = "a";
  auto seen_a_on = alg.decide(view(pts, b, lights, m));
  EXPECT_TRUE(is_null(seen_a_on));
  EXPECT_EQ(seen_a_on.color, std::optional<Color>("b"));

  lights[b] = "b";
  auto all_three = alg.decide(view(pts, spec.role("c"), lights, m));
  EXPECT_TRUE(is_null(all_three));
  EXPECT_EQ(all_three.color, std::optional<Color>("on"));

  lights[a] = "on";
  auto go = alg.decide(view(pts, a, lights, m));
  EXPECT_EQ(go.color, std::optional<Color>("a"));
  auto roles = pseudo_roles(pts);
  EXPECT_TRUE(pseudo_target_ok(*roles, pts, global(pts, a, go)));
}

TEST(LsOblotTransparent, EndpointsStretch) {
  auto spec = line_stretch_spec(4, 1.0);
  auto pts = spec.initial.positions();
  const ModelId m{LightClass::kOblot, SyncMode::kAsync};
  LsOblotTransparent alg;
  auto left = alg.decide(view(pts, 0, {}, m, true));
  EXPECT_NEAR(dist(global(pts, 0, left), {-0.25, 0}), 0.0, 1e-12);
  auto right = alg.decide(view(pts, 3, {}, m, true));
  EXPECT_NEAR(dist(global(pts, 3, right), {3.25, 0}), 0.0, 1e-12);
  EXPECT_TRUE(is_null(alg.decide(view(pts, 1, {}, m, true))));
  auto opaque = view(pts, 0, {}, m, false);
  EXPECT_EQ(opaque.visible.size(), 1u);
  EXPECT_TRUE(is_null(alg.decide(opaque)));
}

/// Every look of a seeded run, re-evaluated under fresh random frames and shuffled entries.
class Discipline : public ::testing::TestWithParam<std::string> {};

TEST_P(Discipline, PaletteAnonymityAndFrames) {
  RunConfig cfg;
  cfg.algorithm = GetParam();
  cfg.seed = 3;
  auto out = execute(cfg);
  ASSERT_TRUE(out.ok());
  auto alg = make_algorithm(cfg.algorithm);
  const auto palette = alg->palette();
  const bool oblot = out.resolved.model.light == LightClass::kOblot;
  if (oblot) {
    EXPECT_EQ(palette, (std::vector<Color>{kOff}));
  }
  std::mt19937_64 rng(17);
  std::size_t checked = 0;
  for (const auto& e : out.trace.events) {
    if (e.kind != EventKind::kLook || !e.robot || checked >= 150) continue;
    auto cfg_at = configuration_at(out.trace, e.t);
    auto pts = cfg_at.positions();
    std::vector<Color> lights;
    for (const auto& r : cfg_at.robots) lights.push_back(r.light);
    const double scale = diameter(pts);
    std::optional<Point> first;
    std::optional<Color> first_color;
    for (int trial = 0; trial < 3; ++trial) {
      auto frame = LocalFrame::sample(pts[*e.robot], rng);
      auto snap = take_snapshot(pts, lights, *e.robot, frame, out.resolved.model, out.resolved.transparent, {}, &rng);
      auto d = alg->decide(snap);
      if (d.color) {
        EXPECT_NE(std::find(palette.begin(), palette.end(), *d.color), palette.end()) << *d.color;
      }
      if (oblot) {
        EXPECT_FALSE(d.color);
      }
      Point g = frame.to_global(d.destination);
      if (!first) {
        first = g;
        first_color = d.color;
      } else {
        EXPECT_NEAR(dist(*first, g), 0.0, 1e-7 * std::max(scale, 1.0)) << cfg.algorithm << " t=" << e.t;
        EXPECT_EQ(first_color, d.color) << cfg.algorithm << " t=" << e.t;
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

std::vector<std::string> positive_algorithms() {
  std::vector<std::string> out;
  for (const auto& a : algorithm_list())
    if (a.positive) out.push_back(a.name);
  return out;
}

INSTANTIATE_TEST_SUITE_P(Positive, Discipline, ::testing::ValuesIn(positive_algorithms()),
                         [](const auto& info) { return info.param; });

TEST(Registry, EveryAlgorithmResolves) {
  for (const auto& info : algorithm_list()) {
    auto alg = make_algorithm(info.name);
    ASSERT_TRUE(alg) << info.name;
    EXPECT_EQ(alg->name(), info.name);
    auto compat = alg->compatible();
    EXPECT_NE(std::find(compat.begin(), compat.end(), info.weakest), compat.end()) << info.name;
    auto pal = alg->palette();
    EXPECT_NE(std::find(pal.begin(), pal.end(), kOff), pal.end()) << info.name;
  }
  EXPECT_FALSE(make_algorithm("nope"));
}

TEST(Registry, LumiSpinningPalette) {
  EXPECT_EQ(SpiLumiAsync().palette().size(), 10u);
}

}  // namespace
}  // namespace opaque_swarm
