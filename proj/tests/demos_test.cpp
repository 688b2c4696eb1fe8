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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "opaque_swarm/demos.hpp"

namespace opaque_swarm {
namespace {

std::vector<MoveSegment> real_moves(const Trace& t, std::size_t robot) {
  std::vector<MoveSegment> out;
  for (const auto& e : t.events)
    if (e.kind == EventKind::kMoveStart && e.robot == robot && e.from != e.to) out.push_back({e.from, e.to, e.t, e.t_end});
  return out;
}

TEST(Demos, AllReproduceDeterministically) {
  for (const auto& d : demo_list()) {
    auto a = d.run();
    auto b = d.run();
    EXPECT_TRUE(a.reproduced) << d.name << ": " << a.headline;
    EXPECT_EQ(a.headline, b.headline) << d.name;
    EXPECT_EQ(a.details, b.details) << d.name;
    ASSERT_TRUE(a.trace && b.trace) << d.name;
    EXPECT_EQ(a.trace->events, b.trace->events) << d.name;
  }
}

TEST(Demos, FlipFlopFlipDoubleFlip) {
  auto rep = demo_fff_ssync_break();
  const auto spec = flip_flop_flip_spec();
  auto moves = real_moves(*rep.trace, spec.role("r"));
  ASSERT_GE(moves.size(), 2u);
  // The second solo activation flips r back across line(p, q) instead of advancing.
  EXPECT_LT(moves[0].to.x, 0.0);
  EXPECT_GT(moves[1].to.x, 0.0);
  bool path = false;
  for (const auto& v : rep.violations)
    path = path || v.kind == ViolationKind::kPathConstraint || v.kind == ViolationKind::kPhaseRegression;
  EXPECT_TRUE(path);
}

TEST(Demos, SpinningSecondRotation) {
  auto rep = demo_spinning_double_activation();
  const auto spec = make_problem("spi", {{"figure", 1}});
  auto moves = real_moves(*rep.trace, spec.role("r0"));
  ASSERT_GE(moves.size(), 2u);
  EXPECT_EQ(moves[1].t_start - moves[0].t_start, 1.0);
  // The second rotation is half the minimal gap of the already rotated configuration.
  const Point o = spec.point("center");
  auto angle = [&](Point p) { return std::atan2(p.y - o.y, p.x - o.x); };
  auto before = configuration_at(*rep.trace, moves[1].t_start).positions();
  std::vector<double> a;
  for (auto p : before) a.push_back(std::fmod(angle(p) + 2 * kPi, 2 * kPi));
  std::sort(a.begin(), a.end());
  double min_gap = 2 * kPi - (a.back() - a.front());
  for (std::size_t i = 1; i < a.size(); ++i) min_gap = std::min(min_gap, a[i] - a[i - 1]);
  double swept = std::abs(std::remainder(angle(moves[1].to) - angle(moves[1].from), 2 * kPi));
  EXPECT_NEAR(swept, min_gap / 2, 1e-7);
  EXPECT_GT(std::abs(swept - spec.params.at("alpha") / 2), 1e-3);
}

TEST(Demos, PseudoTwoConcurrentMovers) {
  auto rep = demo_pseudo_false_election();
  const auto spec = make_problem("pse", {{"figure", 1}});
  EXPECT_EQ(rep.headline.rfind("two robots moving concurrently at t=", 0), 0u) << rep.headline;
  auto a = real_moves(*rep.trace, spec.role("a"));
  auto b = real_moves(*rep.trace, spec.role("b"));
  ASSERT_FALSE(a.empty());
  ASSERT_FALSE(b.empty());
  EXPECT_LT(b[0].t_start, a[0].t_end);
  EXPECT_GT(b[0].t_end, a[0].t_start);
  // b's look happens with c between b and the moving a.
  for (const auto& e : rep.trace->events)
    if (e.kind == EventKind::kLook && e.robot == spec.role("b")) {
      EXPECT_EQ(e.visible, spec.initial.size() - 2);
      auto at = configuration_at(*rep.trace, e.t).positions();
      EXPECT_TRUE(blocks(at[spec.role("b")], at[spec.role("a")], at[spec.role("c")]));
    }
}

TEST(Demos, AngleShiftCollinearLoss) {
  auto rep = demo_angleshift_ssync_loss();
  const auto spec = angle_shift_spec();
  auto after = configuration_at(*rep.trace, 1.0).positions();
  EXPECT_TRUE(collinear(after[spec.role("a")], after[spec.role("b")], after[spec.role("c")]));
  EXPECT_FALSE(angle_shift_roles(after));
  EXPECT_FALSE(monitor(spec, *rep.trace).satisfied(spec));
}

TEST(Demos, LineStretchCardinality) {
  auto rep = demo_linestretch_opacity();
  ASSERT_EQ(rep.details.size(), 7u);
  for (std::size_t n = 4; n <= 10; ++n)
    EXPECT_NE(rep.details[n - 4].find("cardinality 1 of " + std::to_string(n - 1)), std::string::npos)
        << rep.details[n - 4];
}

}  // namespace
}  // namespace opaque_swarm
