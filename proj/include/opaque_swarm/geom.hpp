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
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opaque_swarm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point unit(Point a) { return a / norm(a); }
inline Point polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Angle normalized to [0, 2pi).
inline double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

/// Every equality-like predicate in the library goes through one of these.
/// The effective threshold for a set of points is eps_abs + eps_rel * diameter.
struct Tolerance {
  double eps_rel = 1e-9;
  double eps_abs = 1e-9;

  double at(double scale) const { return eps_abs + eps_rel * std::abs(scale); }
  bool valid() const { return eps_rel > 0 && eps_abs > 0 && eps_rel < 1e-3; }
};

inline double diameter(std::span<const Point> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, dist(pts[i], pts[j]));
  return d;
}

/// Distance from p to the infinite line through a and b (a != b).
inline double line_distance(Point a, Point b, Point p) {
  Point d = b - a;
  return std::abs(cross(d, p - a)) / norm(d);
}

inline double segment_distance(Point a, Point b, Point p) {
  Point d = b - a;
  double l2 = dot(d, d);
  if (l2 == 0.0) return dist(a, p);
  double s = std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
  return dist(a + s * d, p);
}

inline double segment_segment_distance(Point a, Point b, Point c, Point d) {
  double o1 = cross(b - a, c - a), o2 = cross(b - a, d - a);
  double o3 = cross(d - c, a - c), o4 = cross(d - c, b - c);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return 0.0;
  return std::min({segment_distance(a, b, c), segment_distance(a, b, d), segment_distance(c, d, a),
                   segment_distance(c, d, b)});
}

inline bool nearly_equal(Point a, Point b, const Tolerance& tol, double scale) {
  return dist(a, b) <= tol.at(scale);
}

/// Symmetric in its arguments: the two farthest-apart points define the line and
/// the third is tested against it.
inline bool collinear(Point p, Point q, Point r, const Tolerance& tol = {}) {
  double dpq = dist(p, q), dqr = dist(q, r), dpr = dist(p, r);
  double diam = std::max({dpq, dqr, dpr});
  double thr = tol.at(diam);
  if (diam <= thr) return true;
  if (dpr >= dpq && dpr >= dqr) return line_distance(p, r, q) <= thr;
  if (dpq >= dqr) return line_distance(p, q, r) <= thr;
  return line_distance(q, r, p) <= thr;
}

/// True iff candidate sits strictly inside the segment observer-target.
inline bool blocks(Point observer, Point target, Point candidate, const Tolerance& tol = {}) {
  Point d = target - observer;
  double len = norm(d);
  double thr = tol.at(len);
  if (len <= thr) return false;
  if (line_distance(observer, target, candidate) > thr) return false;
  double s = dot(candidate - observer, d) / (len * len);
  double margin = thr / len;
  return s > margin && s < 1.0 - margin;
}

struct Circle {
  Point center;
  double radius = 0.0;
};

inline Circle circumcircle(Point p, Point q, Point r, const Tolerance& tol = {}) {
  if (collinear(p, q, r, tol)) throw GeometryError("circumcircle: collinear points");
  Point b = q - p, c = r - p;
  double d = 2.0 * cross(b, c);
  double b2 = dot(b, b), c2 = dot(c, c);
  Point u{(c.y * b2 - b.y * c2) / d, (b.x * c2 - c.x * b2) / d};
  return {p + u, norm(u)};
}

/// Rotates p about center by theta; orientation +1 is counter-clockwise.
inline Point rotate_about(Point p, Point center, double theta, int orientation = +1) {
  double a = orientation >= 0 ? theta : -theta;
  double cs = std::cos(a), sn = std::sin(a);
  Point v = p - center;
  return center + Point{cs * v.x - sn * v.y, sn * v.x + cs * v.y};
}

struct RegularPolygon {
  Point center;
  double radius = 1.0;
  int n = 3;
  double phase = 0.0;

  Point vertex(int k) const { return center + polar(radius, phase + kTwoPi * k / n); }
  std::vector<Point> vertices() const {
    std::vector<Point> v;
    v.reserve(n);
    for (int k = 0; k < n; ++k) v.push_back(vertex(k));
    return v;
  }
  double edge_length() const { return 2.0 * radius * std::sin(kPi / n); }
};

struct PseudoPolygon {
  std::vector<Point> members;
  RegularPolygon polygon;
};

/// Points sorted counter-clockwise around a center, with the circular gaps.
/// gaps[i] is the angle from order[i] to order[(i+1) % size].
struct AngularOrder {
  std::vector<std::size_t> order;
  std::vector<double> angles;  // angle of order[i]
  std::vector<double> gaps;
  double min_gap = 0.0;
  std::size_t min_index = 0;   // gap min_index runs order[min_index] -> order[min_index+1]
  bool ambiguous = false;

  std::size_t next(std::size_t i) const { return (i + 1) % order.size(); }
  std::size_t prev(std::size_t i) const { return (i + order.size() - 1) % order.size(); }
};

inline AngularOrder angular_order(std::span<const Point> pts, Point center,
                                  const Tolerance& tol = {}) {
  AngularOrder out;
  const std::size_t m = pts.size();
  if (m == 0) return out;
  std::vector<std::pair<double, std::size_t>> a;
  a.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Point v = pts[i] - center;
    if (norm(v) == 0.0) throw GeometryError("angular_order: point coincides with center");
    a.emplace_back(normalize_angle(std::atan2(v.y, v.x)), i);
  }
  std::sort(a.begin(), a.end());
  for (auto& [ang, idx] : a) {
    out.order.push_back(idx);
    out.angles.push_back(ang);
  }
  out.gaps.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double g = (i + 1 < m) ? a[i + 1].first - a[i].first : a[0].first + kTwoPi - a[i].first;
    out.gaps[i] = g;
  }
  out.min_index = static_cast<std::size_t>(
      std::min_element(out.gaps.begin(), out.gaps.end()) - out.gaps.begin());
  out.min_gap = out.gaps[out.min_index];
  double ang_tol = std::max(1e-12, tol.eps_rel * kTwoPi);
  for (std::size_t i = 0; i < m; ++i)
    if (i != out.min_index && out.gaps[i] - out.min_gap <= ang_tol) out.ambiguous = true;
  return out;
}

/// Circle through the most spread-out triple of the given points.
inline Circle fit_circle(std::span<const Point> pts, const Tolerance& tol = {}) {
  if (pts.size() < 3) throw GeometryError("fit_circle: need at least three points");
  double best = -1.0;
  std::size_t bi = 0, bj = 1, bk = 2;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        double area = std::abs(cross(pts[j] - pts[i], pts[k] - pts[i]));
        if (area > best) {
          best = area;
          bi = i, bj = j, bk = k;
        }
      }
  return circumcircle(pts[bi], pts[bj], pts[bk], tol);
}

inline bool concyclic(std::span<const Point> pts, const Circle& c, const Tolerance& tol = {}) {
  double thr = tol.at(2.0 * c.radius);
  return std::all_of(pts.begin(), pts.end(),
                     [&](Point p) { return std::abs(dist(p, c.center) - c.radius) <= thr; });
}

/// Recovers the unique regular polygon having `members` as more than half of its
/// vertices. Candidate vertex counts range over [max(|Q|, 3), 2(|Q|-1)].
inline PseudoPolygon associated_polygon(std::span<const Point> members, const Tolerance& tol = {}) {
  const int m = static_cast<int>(members.size());
  if (m < 3) throw GeometryError("associated_polygon: need at least three members");
  Circle circle = fit_circle(members, tol);
  if (!concyclic(members, circle, tol)) throw GeometryError("associated_polygon: not concyclic");

  AngularOrder ord = angular_order(members, circle.center, tol);
  const double anchor = ord.angles[0];
  const double ang_tol = tol.at(2.0 * circle.radius) / circle.radius;

  auto fits = [&](int n) {
    const double step = kTwoPi / n;
    for (double ang : ord.angles) {
      double k = (ang - anchor) / step;
      if (std::abs(k - std::round(k)) * step > ang_tol) return false;
    }
    return true;
  };
  auto adjacent_pair = [&](int n) {
    const double step = kTwoPi / n;
    return std::any_of(ord.gaps.begin(), ord.gaps.end(),
                       [&](double g) { return std::abs(g - step) <= ang_tol; });
  };

  std::vector<int> found;
  for (int n = std::max(m, 3); n <= 2 * (m - 1); ++n)
    if (2 * m >= n + 2 && fits(n) && adjacent_pair(n)) found.push_back(n);
  if (found.size() != 1) throw GeometryError("associated_polygon: not a pseudo-polygon");

  const int n = found.front();
  RegularPolygon poly{circle.center, circle.radius, n, std::fmod(anchor, kTwoPi / n)};
  return {std::vector<Point>(members.begin(), members.end()), poly};
}

/// Index of the polygon vertex closest to p.
inline int nearest_vertex(const RegularPolygon& poly, Point p) {
  double a = normalize_angle(std::atan2(p.y - poly.center.y, p.x - poly.center.x) - poly.phase);
  return static_cast<int>(std::lround(a / (kTwoPi / poly.n))) % poly.n;
}

inline bool strictly_outside(const RegularPolygon& poly, Point x, const Tolerance& tol = {}) {
  double thr = tol.at(2.0 * poly.radius);
  for (int k = 0; k < poly.n; ++k) {
    Point u = poly.vertex(k), v = poly.vertex(k + 1);
    // Vertices run counter-clockwise, so the interior lies on the left.
    if (cross(v - u, x - u) / norm(v - u) < -thr) return true;
  }
  return false;
}

inline bool safe_zone_contains(const RegularPolygon& poly, Point x, const Tolerance& tol = {}) {
  if (!strictly_outside(poly, x, tol)) return false;
  const auto vs = poly.vertices();
  const double thr = tol.at(std::max(2.0 * poly.radius, dist(x, poly.center)));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (collinear(vs[i], vs[j], x, tol)) return false;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Point& u = vs[i];
    const Point& v = vs[(i + 1) % vs.size()];
    if (std::abs(dist(x, u) - dist(x, v)) <= thr) return false;
  }
  const double ell = poly.edge_length();
  return std::all_of(vs.begin(), vs.end(), [&](Point v) { return dist(x, v) >= ell - thr; });
}

}  // namespace opaque_swarm
