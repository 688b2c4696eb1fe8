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

#include <random>

#include <gtest/gtest.h>

#include "opaque_swarm/model.hpp"

namespace opaque_swarm {
namespace {

const ModelId kFcomA{LightClass::kFcom, SyncMode::kAsync};
const ModelId kLumiA{LightClass::kLumi, SyncMode::kAsync};
const ModelId kFstaA{LightClass::kFsta, SyncMode::kAsync};

TEST(ModelId, TwelveDistinctModels) {
  auto ms = all_models();
  ASSERT_EQ(ms.size(), 12u);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) EXPECT_FALSE(ms[i] == ms[j]);
}

TEST(ModelId, ParseAcceptsBothSpellings) {
  EXPECT_EQ(parse_model("lumi,async"), kLumiA);
  EXPECT_EQ(parse_model("LUMI^A"), kLumiA);
  EXPECT_EQ(parse_model("fcom^async"), kFcomA);
  EXPECT_FALSE(parse_model("lumi"));
  EXPECT_FALSE(parse_model("glow,async"));
  for (const auto& m : all_models()) EXPECT_EQ(parse_model(to_string(m)), m);
}

TEST(ModelId, LightCapabilities) {
  EXPECT_FALSE(has_internal_light(LightClass::kOblot));
  EXPECT_FALSE(has_external_light(LightClass::kOblot));
  EXPECT_TRUE(has_internal_light(LightClass::kFsta));
  EXPECT_FALSE(has_external_light(LightClass::kFsta));
  EXPECT_FALSE(has_internal_light(LightClass::kFcom));
  EXPECT_TRUE(has_external_light(LightClass::kFcom));
  EXPECT_TRUE(has_internal_light(LightClass::kLumi));
  EXPECT_TRUE(has_external_light(LightClass::kLumi));
}

TEST(VisibleSet, CollinearRowSeesOnlyNeighbour) {
  std::vector<Point> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  EXPECT_EQ(visible_set(pts, 0, false), (std::vector<std::size_t>{1}));
  EXPECT_EQ(visible_set(pts, 1, false), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(visible_set(pts, 0, true), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(VisibleSet, TriangleSeesEveryone) {
  std::vector<Point> pts{{0, 0}, {3, 0.2}, {1, 2}};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(visible_set(pts, i, false).size(), 2u);
}

TEST(Snapshot, FcomHidesOwnLight) {
  std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}};
  std::vector<Color> lights{"s", "off", "x"};
  auto snap = take_snapshot(pts, lights, 0, LocalFrame{0, false, 1, pts[0]}, kFcomA, false);
  EXPECT_FALSE(snap.own_internal);
  ASSERT_EQ(snap.visible.size(), 2u);
  for (const auto& e : snap.visible) {
    ASSERT_TRUE(e.color);
    EXPECT_NE(*e.color, "s");
  }
}

TEST(Snapshot, FstaSeesOnlyOwnLight) {
  std::vector<Point> pts{{0, 0}, {1, 0}};
  std::vector<Color> lights{"went", "off"};
  auto snap = take_snapshot(pts, lights, 0, LocalFrame{0, false, 1, pts[0]}, kFstaA, false);
  ASSERT_TRUE(snap.own_internal);
  EXPECT_EQ(*snap.own_internal, "went");
  EXPECT_FALSE(snap.visible[0].color);
}

TEST(Snapshot, LumiSeesBoth) {
  std::vector<Point> pts{{0, 0}, {1, 0}};
  std::vector<Color> lights{"a", "b"};
  auto snap = take_snapshot(pts, lights, 0, LocalFrame{0, false, 1, pts[0]}, kLumiA, false);
  EXPECT_EQ(snap.own_internal, std::optional<Color>("a"));
  EXPECT_EQ(snap.visible[0].color, std::optional<Color>("b"));
}

TEST(Snapshot, TranslationOnlyFrame) {
  std::vector<Point> pts{{1, 1}, {2, 1}};
  std::vector<Color> lights{"off", "off"};
  auto snap = take_snapshot(pts, lights, 0, LocalFrame{0, false, 1, {1, 1}}, kFcomA, false);
  EXPECT_NEAR(snap.visible[0].position.x, 1.0, 1e-15);
  EXPECT_NEAR(snap.visible[0].position.y, 0.0, 1e-15);
}

TEST(Snapshot, RotatedScaledFrame) {
  std::vector<Point> pts{{1, 1}, {2, 1}};
  std::vector<Color> lights{"off", "off"};
  auto snap = take_snapshot(pts, lights, 0, LocalFrame{kPi / 2, false, 2, {1, 1}}, kFcomA, false);
  EXPECT_NEAR(snap.visible[0].position.x, 0.0, 1e-12);
  EXPECT_NEAR(snap.visible[0].position.y, 2.0, 1e-12);
}

TEST(LocalFrame, IdentityToGlobal) {
  Point g = frame_to_global(LocalFrame{}, {3, 4});
  EXPECT_EQ(g, (Point{3, 4}));
}

TEST(LocalFrame, ScaledToGlobal) {
  Point g = frame_to_global(LocalFrame{0, false, 2, {1, 1}}, {2, 0});
  EXPECT_NEAR(g.x, 2.0, 1e-15);
  EXPECT_NEAR(g.y, 1.0, 1e-15);
}

TEST(LocalFrame, RoundTripWithinEightUlps) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    auto f = LocalFrame::sample(Point{u(rng), u(rng)}, rng);
    Point p{u(rng), u(rng)};
    Point back = f.to_global(f.to_local(p));
    const double ulp = std::numeric_limits<double>::epsilon() * std::max({std::abs(p.x), std::abs(p.y), 1.0}) *
                       std::max({norm(f.origin), 1.0});
    EXPECT_LE(std::abs(back.x - p.x), 8 * ulp);
    EXPECT_LE(std::abs(back.y - p.y), 8 * ulp);
  }
}

TEST(ValidateConfiguration, DistinctIsValid) {
  auto c = Configuration::from_points(std::vector<Point>{{0, 0}, {1, 0}});
  EXPECT_TRUE(validate_configuration(c).empty());
}

TEST(ValidateConfiguration, CoincidentIsMultiplicity) {
  auto c = Configuration::from_points(std::vector<Point>{{0, 0}, {0, 0}});
  auto bad = validate_configuration(c);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(ValidateConfiguration, WithinToleranceIsMultiplicity) {
  Tolerance tol;
  auto c = Configuration::from_points(std::vector<Point>{{0, 0}, {tol.eps_abs / 2, 0}});
  EXPECT_EQ(validate_configuration(c, tol).size(), 1u);
}

}  // namespace
}  // namespace opaque_swarm
