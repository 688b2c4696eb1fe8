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

#include "opaque_swarm/geom.hpp"

namespace opaque_swarm {
namespace {

double deg(double d) { return d * kPi / 180.0; }

RegularPolygon unit_square() { return {{0, 0}, std::sqrt(2.0), 4, kPi / 4}; }

TEST(Collinear, PointsOnAxis) { EXPECT_TRUE(collinear({0, 0}, {1, 0}, {2, 0})); }

TEST(Collinear, RightTriangle) { EXPECT_FALSE(collinear({0, 0}, {0, 1}, {1, 0})); }

TEST(Collinear, WithinAbsoluteTolerance) {
  Tolerance tol{1e-12, 1e-9};
  EXPECT_TRUE(collinear({0, 0}, {2, 1e-12}, {4, 0}, tol));
}

TEST(Collinear, SymmetricInArguments) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 2000; ++i) {
    Point p{u(rng), u(rng)}, q{u(rng), u(rng)}, r{u(rng), u(rng)};
    bool c = collinear(p, q, r);
    EXPECT_EQ(c, collinear(q, r, p));
    EXPECT_EQ(c, collinear(r, p, q));
    EXPECT_EQ(c, collinear(q, p, r));
  }
}

TEST(Blocks, MidpointBlocks) { EXPECT_TRUE(blocks({0, 0}, {2, 0}, {1, 0})); }

TEST(Blocks, BeyondSegmentDoesNotBlock) { EXPECT_FALSE(blocks({0, 0}, {2, 0}, {3, 0})); }

TEST(Blocks, OffLineDoesNotBlock) { EXPECT_FALSE(blocks({0, 0}, {2, 0}, {1, 0.5})); }

TEST(Blocks, EndpointsDoNotBlock) {
  EXPECT_FALSE(blocks({0, 0}, {2, 0}, {0, 0}));
  EXPECT_FALSE(blocks({0, 0}, {2, 0}, {2, 0}));
}

TEST(Circumcircle, RightIsoscelesTriangle) {
  auto c = circumcircle({0, 0}, {2, 0}, {0, 2});
  EXPECT_NEAR(c.center.x, 1.0, 1e-12);
  EXPECT_NEAR(c.center.y, 1.0, 1e-12);
  EXPECT_NEAR(c.radius, std::sqrt(2.0), 1e-12);
}

TEST(Circumcircle, UnitCircle) {
  auto c = circumcircle({1, 0}, {-1, 0}, {0, 1});
  EXPECT_NEAR(c.center.x, 0.0, 1e-12);
  EXPECT_NEAR(c.center.y, 0.0, 1e-12);
  EXPECT_NEAR(c.radius, 1.0, 1e-12);
}

TEST(Circumcircle, CollinearThrows) { EXPECT_THROW(circumcircle({0, 0}, {1, 0}, {2, 0}), GeometryError); }

TEST(RotateAbout, QuarterTurnCounterClockwise) {
  Point p = rotate_about({1, 0}, {0, 0}, kPi / 2, +1);
  EXPECT_NEAR(p.x, 0.0, 1e-12);
  EXPECT_NEAR(p.y, 1.0, 1e-12);
}

TEST(RotateAbout, ZeroIsIdentity) {
  Point p = rotate_about({1, 0}, {0, 0}, 0.0);
  EXPECT_EQ(p, (Point{1, 0}));
}

TEST(RotateAbout, QuarterTurnClockwiseAboutOffsetCenter) {
  Point p = rotate_about({2, 1}, {1, 1}, kPi / 2, -1);
  EXPECT_NEAR(p.x, 1.0, 1e-12);
  EXPECT_NEAR(p.y, 0.0, 1e-12);
}

TEST(AssociatedPolygon, ThreeSquareVertices) {
  std::vector<Point> q{{1, 0}, {0, 1}, {-1, 0}};
  auto pp = associated_polygon(q);
  EXPECT_EQ(pp.polygon.n, 4);
  EXPECT_NEAR(pp.polygon.radius, 1.0, 1e-9);
  for (Point v : std::vector<Point>{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) {
    int k = nearest_vertex(pp.polygon, v);
    EXPECT_NEAR(dist(pp.polygon.vertex(k), v), 0.0, 1e-9);
  }
}

TEST(AssociatedPolygon, FullHexagon) {
  RegularPolygon hex{{3, -1}, 2.0, 6, 0.3};
  auto pp = associated_polygon(hex.vertices());
  EXPECT_EQ(pp.polygon.n, 6);
  EXPECT_NEAR(pp.polygon.center.x, 3.0, 1e-9);
  EXPECT_NEAR(pp.polygon.center.y, -1.0, 1e-9);
  EXPECT_NEAR(pp.polygon.radius, 2.0, 1e-9);
}

TEST(AssociatedPolygon, FiveOctagonVertices) {
  std::vector<Point> q;
  for (int k : {0, 1, 2, 4, 5}) q.push_back(polar(1.0, deg(22.5 + 45.0 * k)));
  EXPECT_EQ(associated_polygon(q).polygon.n, 8);
}

TEST(AssociatedPolygon, RejectsNonConcyclic) {
  std::vector<Point> q{{0, 0}, {1, 0}, {2, 0}, {3, 1}};
  EXPECT_THROW(associated_polygon(q), GeometryError);
}

TEST(SafeZone, CenterIsInside) { EXPECT_FALSE(safe_zone_contains(unit_square(), {0, 0})); }

TEST(SafeZone, EdgeBisectorExcluded) { EXPECT_FALSE(safe_zone_contains(unit_square(), {10, 0})); }

TEST(SafeZone, GenericFarPointIncluded) { EXPECT_TRUE(safe_zone_contains(unit_square(), {10, 3.1})); }

TEST(SafeZone, VertexLineExcluded) {
  // On the diagonal through (1,1) and (-1,-1).
  EXPECT_FALSE(safe_zone_contains(unit_square(), {5, 5}));
  // On the edge line y = 1.
  EXPECT_FALSE(safe_zone_contains(unit_square(), {7, 1}));
}

TEST(SafeZone, TooCloseToVertexExcluded) { EXPECT_FALSE(safe_zone_contains(unit_square(), {1.3, 1.9})); }

TEST(AngularOrder, SpinningFigureMinimalGap) {
  std::vector<Point> pts;
  for (double a : {0, 20, 60, 100, 200, 280}) pts.push_back(polar(1.0, deg(a)));
  auto ord = angular_order(pts, {0, 0});
  EXPECT_NEAR(ord.min_gap, deg(20), 1e-12);
  EXPECT_FALSE(ord.ambiguous);
  EXPECT_EQ(ord.order[ord.min_index], 0u);
  EXPECT_EQ(ord.order[ord.next(ord.min_index)], 1u);
}

TEST(AngularOrder, SquareIsAmbiguous) {
  auto ord = angular_order(unit_square().vertices(), {0, 0});
  EXPECT_TRUE(ord.ambiguous);
  for (double g : ord.gaps) EXPECT_NEAR(g, kPi / 2, 1e-12);
}

TEST(AngularOrder, ThreePointsGaps) {
  std::vector<Point> pts{polar(1, deg(0)), polar(1, deg(90)), polar(1, deg(181))};
  auto ord = angular_order(pts, {0, 0});
  EXPECT_NEAR(ord.min_gap, deg(90), 1e-12);
  EXPECT_EQ(ord.order[ord.min_index], 0u);
  std::vector<double> gaps = ord.gaps;
  std::sort(gaps.begin(), gaps.end());
  EXPECT_NEAR(gaps[0], deg(90), 1e-12);
  EXPECT_NEAR(gaps[1], deg(91), 1e-12);
  EXPECT_NEAR(gaps[2], deg(179), 1e-12);
}

TEST(AngularOrder, GapsSumToFullTurn) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, kTwoPi);
  for (int i = 0; i < 200; ++i) {
    std::vector<Point> pts;
    for (int k = 0; k < 7; ++k) pts.push_back(polar(1.0, u(rng)));
    auto ord = angular_order(pts, {0, 0});
    double sum = 0;
    for (double g : ord.gaps) sum += g;
    EXPECT_NEAR(sum, kTwoPi, 1e-9);
  }
}

TEST(Tolerance, ScalesWithDiameter) {
  Tolerance t{1e-6, 1e-9};
  EXPECT_DOUBLE_EQ(t.at(0), 1e-9);
  EXPECT_DOUBLE_EQ(t.at(1000), 1e-9 + 1e-3);
  EXPECT_TRUE(t.valid());
  EXPECT_FALSE((Tolerance{0, 1e-9}).valid());
}

}  // namespace
}  // namespace opaque_swarm
