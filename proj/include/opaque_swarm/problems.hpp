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
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opaque_swarm/engine.hpp"
#include "opaque_swarm/geom.hpp"
#include "opaque_swarm/model.hpp"
#include "opaque_swarm/sched.hpp"

namespace opaque_swarm {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhaseContext {
  const Configuration& initial;
  const Configuration& entry;
  std::size_t cycle = 0;
  double thr = 0.0;
};

/// One (tau, phi) step. `may_move` and `stop_ok` form the path condition that
/// holds while the phase is pending; `reached` is the phase condition.
struct Phase {
  std::string name;
  std::function<bool(std::size_t robot)> may_move;
  std::function<bool(std::size_t robot, Point pos, const PhaseContext&)> stop_ok;
  std::function<bool(const Configuration&, const PhaseContext&)> reached;
};

using Params = std::map<std::string, double>;

struct ProblemSpec {
  std::string name;
  Params params;
  Configuration initial;
  std::map<std::string, std::size_t> roles;
  std::map<std::string, Point> points;
  std::vector<Phase> phases;
  bool perpetual = false;
  std::size_t cycles_to_check = 5;
  std::size_t stability_epochs = 3;
  Tolerance tol;

  double thr() const { return tol.at(diameter(initial.positions())); }
  std::size_t role(const std::string& r) const { return roles.at(r); }
  Point point(const std::string& p) const { return points.at(p); }
};

inline bool phi0(const ProblemSpec& spec, const Configuration& c) {
  if (c.size() != spec.initial.size()) return false;
  for (const auto& r : c.robots)
    if (r.light != kOff) return false;
  return validate_configuration(c, spec.tol).empty();
}

struct PhaseProgress {
  std::size_t phases_completed = 0;
  std::vector<double> entry_times;
  std::size_t cycles = 0;
  bool finished = false;
  double finished_at = 0.0;
  std::size_t stable_epochs = 0;

  friend bool operator==(const PhaseProgress&, const PhaseProgress&) = default;
};

struct MonitorResult {
  PhaseProgress progress;
  std::vector<Violation> violations;

  /// All finite phases with the stillness window, or the requested number of cycles.
  bool satisfied(const ProblemSpec& spec) const {
    if (spec.perpetual) return progress.cycles >= spec.cycles_to_check;
    return progress.finished && progress.stable_epochs >= spec.stability_epochs;
  }
  bool clean() const { return violations.empty(); }
};

namespace detail {

inline std::size_t count_epochs_after(const Trace& trace, double t0, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::size_t count = 0, epochs = 0;
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::kLook || !e.robot || e.t <= t0) continue;
    if (!seen[*e.robot]) {
      seen[*e.robot] = true;
      if (++count == n) {
        ++epochs;
        std::fill(seen.begin(), seen.end(), false);
        count = 0;
      }
    }
  }
  return epochs;
}

}  // namespace detail

/// Tracks phase progress over a trace and reports path-condition violations.
inline MonitorResult monitor(const ProblemSpec& spec, const Trace& trace) {
  MonitorResult out;
  const std::size_t n = trace.size();
  const std::size_t P = spec.phases.size();
  const double thr = spec.thr();
  std::vector<Point> parked = trace.initial.positions();
  std::vector<Color> light(n, kOff);
  std::vector<bool> moving(n, false);
  std::size_t in_motion = 0;
  Configuration entry = trace.initial;
  auto& prog = out.progress;

  auto current = [&]() { return spec.perpetual ? prog.phases_completed % P : prog.phases_completed; };
  auto done = [&]() { return !spec.perpetual && prog.phases_completed >= P; };
  auto config = [&]() {
    Configuration c;
    for (std::size_t i = 0; i < n; ++i) c.robots.push_back({parked[i], light[i]});
    return c;
  };

  for (const auto& e : trace.events) {
    if (e.kind == EventKind::kLight && e.robot) light[*e.robot] = e.color;
    if (e.kind == EventKind::kMoveStart && e.robot && e.from != e.to) {
      const std::size_t i = *e.robot;
      moving[i] = true;
      ++in_motion;
      if (P == 0) continue;
      if (done()) {
        out.violations.push_back({ViolationKind::kPathConstraint, e.t, {i}, e.from, P,
                                  "robot moves after the final phase"});
      } else if (auto k = current(); spec.phases[k].may_move && !spec.phases[k].may_move(i)) {
        out.violations.push_back({ViolationKind::kPathConstraint, e.t, {i}, e.from, k,
                                  "robot must stay still during " + spec.phases[k].name});
      }
    }
    if (e.kind == EventKind::kMoveEnd && e.robot && moving[*e.robot]) {
      const std::size_t i = *e.robot;
      moving[i] = false;
      --in_motion;
      parked[i] = e.to;
      if (P > 0 && !done()) {
        const std::size_t k = current();
        const PhaseContext ctx{trace.initial, entry, prog.phases_completed / std::max<std::size_t>(P, 1), thr};
        if (spec.phases[k].stop_ok && !spec.phases[k].stop_ok(i, e.to, ctx)) {
          bool regression = false;
          for (std::size_t j = 0; j < k && !regression; ++j)
            regression = spec.phases[j].stop_ok && spec.phases[j].stop_ok(i, e.to, ctx);
          out.violations.push_back({regression ? ViolationKind::kPhaseRegression : ViolationKind::kPathConstraint,
                                    e.t, {i}, e.to, k, "illegal stop during " + spec.phases[k].name});
        }
      }
    } else if (e.kind == EventKind::kMoveEnd && e.robot) {
      parked[*e.robot] = e.to;
    }
    const bool checkpoint = e.kind == EventKind::kMoveEnd || e.kind == EventKind::kRoundEnd;
    if (checkpoint && in_motion == 0 && P > 0 && !done()) {
      const std::size_t k = current();
      auto now = config();
      const PhaseContext ctx{trace.initial, entry, prog.phases_completed / P, thr};
      if (spec.phases[k].reached(now, ctx)) {
        ++prog.phases_completed;
        prog.entry_times.push_back(e.t);
        entry = now;
        if (done()) {
          prog.finished = true;
          prog.finished_at = e.t;
        }
      }
    }
  }
  if (spec.perpetual && P > 0) prog.cycles = prog.phases_completed / P;
  if (prog.finished) prog.stable_epochs = detail::count_epochs_after(trace, prog.finished_at, n);
  return out;
}

inline TraceMonitor problem_monitor(const ProblemSpec& spec) {
  return [spec](const Trace& t) { return monitor(spec, t).violations; };
}

namespace detail {

inline bool near(Point a, Point b, double thr) { return dist(a, b) <= thr; }

inline bool others_at(const Configuration& c, const Configuration& ref, std::size_t except, double thr) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != except && !near(c.robots[i].position, ref.robots[i].position, thr)) return false;
  return true;
}

inline double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline double deg(double d) { return d * kPi / 180.0; }

}  // namespace detail

// ---------------------------------------------------------------------------
// TriangleRoundTrip

/// Robots 0 and 1 sit on two vertices of an equilateral triangle, robot 2 at its center.
inline ProblemSpec triangle_round_trip_from(const Configuration& c, Params params = {}) {
  if (c.size() != 3) throw InstanceError("TriangleRoundTrip needs 3 robots");
  auto pts = c.positions();
  std::size_t mover = 3;
  for (std::size_t i = 0; i < 3; ++i) {
    Point p = pts[(i + 1) % 3], q = pts[(i + 2) % 3];
    double dp = dist(pts[i], p), dq = dist(pts[i], q), pq = dist(p, q);
    if (std::abs(dp - dq) <= 1e-9 * pq && std::abs(pq - std::sqrt(3.0) * dp) <= 1e-9 * pq) mover = i;
  }
  if (mover == 3) throw InstanceError("TriangleRoundTrip needs a robot at the center of two vertices");
  Point p = pts[(mover + 1) % 3], q = pts[(mover + 2) % 3], o = pts[mover];
  ProblemSpec s;
  s.name = "trt";
  s.initial = c;
  s.params = std::move(params);
  s.params["rho"] = dist(o, p);
  s.roles = {{"mover", mover}, {"p", (mover + 1) % 3}, {"q", (mover + 2) % 3}};
  const Point a = 3.0 * o - p - q;
  s.points = {{"a", a}, {"center", o}};
  auto only_mover = [mover](std::size_t i) { return i == mover; };
  s.phases.push_back({"went", only_mover, nullptr, [=](const Configuration& cfg, const PhaseContext& ctx) {
                        return detail::near(cfg.robots[mover].position, a, ctx.thr) &&
                               detail::others_at(cfg, ctx.initial, mover, ctx.thr);
                      }});
  s.phases.push_back({"back", only_mover, nullptr, [=](const Configuration& cfg, const PhaseContext& ctx) {
                        return detail::near(cfg.robots[mover].position, o, ctx.thr) &&
                               detail::others_at(cfg, ctx.initial, mover, ctx.thr);
                      }});
  return s;
}

inline ProblemSpec triangle_round_trip_spec(double rho = 1.0, std::uint64_t /*seed*/ = 0) {
  if (!(rho > 0.0)) throw InstanceError("rho must be positive");
  auto c = Configuration::from_points(std::vector<Point>{polar(rho, detail::deg(90)), polar(rho, detail::deg(210)), {0, 0}});
  return triangle_round_trip_from(c, {{"rho", rho}});
}

// ---------------------------------------------------------------------------
// FlipFlopFlip

/// r is the robot equidistant from the other two; gamma is the bisector of p, q.
inline ProblemSpec flip_flop_flip_from(const Configuration& c, Params params = {}) {
  if (c.size() != 3) throw InstanceError("FlipFlopFlip needs 3 robots");
  auto pts = c.positions();
  std::size_t r = 3;
  for (std::size_t i = 0; i < 3; ++i) {
    Point p = pts[(i + 1) % 3], q = pts[(i + 2) % 3];
    if (std::abs(dist(pts[i], p) - dist(pts[i], q)) <= 1e-9 * dist(p, q)) r = i;
  }
  if (r == 3) throw InstanceError("FlipFlopFlip needs an isosceles triangle");
  const std::size_t ip = (r + 1) % 3, iq = (r + 2) % 3;
  const Point p = pts[ip], q = pts[iq], b = 0.5 * (p + q);
  const double u = dist(p, q);
  const double eq = std::sqrt(3.0) * u / 2.0;
  const Point axis = unit(pts[r] - b);
  const double r0 = dist(pts[r], b);
  if (std::abs(r0 - eq) <= 1e-9 * u) throw InstanceError("r starts at an equilateral position");
  if (r0 <= 1e-9 * u) throw InstanceError("r starts at the midpoint of p and q");
  ProblemSpec s;
  s.name = "fff";
  s.initial = c;
  s.params = std::move(params);
  s.perpetual = true;
  s.roles = {{"r", r}, {"p", ip}, {"q", iq}};
  s.points = {{"b", b}, {"axis", axis}};
  // Signed coordinate along gamma; positive on gamma' (r's initial side).
  auto along = [=](Point x) { return dot(x - b, axis); };
  auto on_gamma = [=](Point x, double thr) { return std::abs(cross(axis, x - b)) <= thr; };
  auto legal = [=](Point x, double thr) {
    return on_gamma(x, thr) && std::abs(std::abs(along(x)) - eq) > thr && std::abs(along(x)) > thr;
  };
  auto only_r = [r](std::size_t i) { return i == r; };
  auto still = [=](const Configuration& cfg, const PhaseContext& ctx) {
    return detail::others_at(cfg, ctx.initial, r, ctx.thr);
  };
  s.phases.push_back({"flip", only_r,
                      [=](std::size_t, Point x, const PhaseContext& ctx) { return legal(x, ctx.thr) && along(x) < 0; },
                      [=](const Configuration& cfg, const PhaseContext& ctx) {
                        Point x = cfg.robots[r].position;
                        return still(cfg, ctx) && legal(x, ctx.thr) && along(x) < 0;
                      }});
  s.phases.push_back({"flop", only_r,
                      [=](std::size_t, Point x, const PhaseContext& ctx) {
                        return legal(x, ctx.thr) && along(x) < 0 &&
                               -along(x) > -along(ctx.entry.robots[r].position) + ctx.thr;
                      },
                      [=](const Configuration& cfg, const PhaseContext& ctx) {
                        Point x = cfg.robots[r].position;
                        return still(cfg, ctx) && legal(x, ctx.thr) && along(x) < 0 &&
                               -along(x) > -along(ctx.entry.robots[r].position) + ctx.thr;
                      }});
  s.phases.push_back({"flip2", only_r,
                      [=](std::size_t, Point x, const PhaseContext& ctx) { return legal(x, ctx.thr) && along(x) > 0; },
                      [=](const Configuration& cfg, const PhaseContext& ctx) {
                        Point x = cfg.robots[r].position;
                        return still(cfg, ctx) && legal(x, ctx.thr) && along(x) > 0;
                      }});
  return s;
}

/// p = (0, h), q = (0, -h), r = (rx, 0).
inline ProblemSpec flip_flop_flip_spec(double rx = 2.6, double h = 1.0) {
  auto c = Configuration::from_points(std::vector<Point>{{0, h}, {0, -h}, {rx, 0}});
  return flip_flop_flip_from(c, {{"rx", rx}, {"h", h}});
}

// ---------------------------------------------------------------------------
// Newcomer

/// Robots 0..n-1 on the circle, robot n (c) at its center, robot n+1 (s) outside.
inline ProblemSpec newcomer_from(const Configuration& cfg, Params params = {}) {
  const std::size_t total = cfg.size();
  if (total < 9) throw InstanceError("Newcomer needs at least 7 robots on the circle");
  auto pts = cfg.positions();
  std::optional<std::size_t> ic, is;
  for (std::size_t i = 0; i < total && !ic; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < total; ++j)
      if (j != i) d.push_back(dist(pts[i], pts[j]));
    std::sort(d.begin(), d.end());
    double rho = d.front();
    std::size_t eq = 0;
    for (double x : d) eq += std::abs(x - rho) <= 1e-9 * std::max(1.0, rho);
    if (eq == total - 2) ic = i;
  }
  if (!ic) throw InstanceError("Newcomer needs a center robot with n-1 equidistant robots");
  double rho = 0;
  for (std::size_t j = 0; j < total; ++j)
    if (j != *ic) rho = (rho == 0 || dist(pts[*ic], pts[j]) < rho) ? dist(pts[*ic], pts[j]) : rho;
  for (std::size_t j = 0; j < total; ++j)
    if (j != *ic && dist(pts[*ic], pts[j]) > rho * (1 + 1e-9)) is = j;
  if (!is) throw InstanceError("Newcomer needs an external robot");
  const std::size_t c = *ic, s = *is;
  const Point center = pts[c];
  for (std::size_t j = 0; j < total; ++j)
    if (j != c && j != s && blocks(pts[s], center, pts[j])) throw InstanceError("a circle robot blocks s from c");
  const Point dir = unit(pts[s] - center);
  const Point P = center + rho * dir;
  const Point target = center + (rho / 2.0) * dir;
  ProblemSpec sp;
  sp.name = "nwc";
  sp.initial = cfg;
  sp.params = std::move(params);
  sp.params["rho"] = rho;
  sp.params["n"] = static_cast<double>(total - 2);
  sp.roles = {{"c", c}, {"s", s}};
  sp.points = {{"P", P}, {"target", target}, {"center", center}};
  const Point s0 = pts[s];
  sp.phases.push_back({"arrive", [s](std::size_t i) { return i == s; },
                       [=](std::size_t, Point x, const PhaseContext& ctx) { return segment_distance(s0, P, x) <= ctx.thr; },
                       [=](const Configuration& k, const PhaseContext& ctx) {
                         return detail::near(k.robots[s].position, P, ctx.thr) &&
                                detail::others_at(k, ctx.initial, s, ctx.thr);
                       }});
  sp.phases.push_back({"approach", [c](std::size_t i) { return i == c; },
                       [=](std::size_t, Point x, const PhaseContext& ctx) {
                         return segment_distance(center, target, x) <= ctx.thr;
                       },
                       [=](const Configuration& k, const PhaseContext& ctx) {
                         return detail::near(k.robots[c].position, target, ctx.thr) &&
                                detail::near(k.robots[s].position, P, ctx.thr) &&
                                detail::others_at(k, ctx.entry, c, ctx.thr);
                       }});
  return sp;
}

/// n robots at random, pairwise distinct gaps on a circle of radius rho around the
/// origin; s is placed at distance `s_factor * rho` in the middle of the widest gap.
inline ProblemSpec newcomer_spec(std::size_t n = 7, double rho = 2.0, std::uint64_t seed = 1, double s_factor = 1.8) {
  if (n < 7) throw InstanceError("Newcomer needs n >= 7");
  if (!(rho > 0.0) || !(s_factor > 1.05)) throw InstanceError("bad Newcomer parameters");
  auto rng = detail::seeded_stream(seed, 0x4E57);
  std::uniform_real_distribution<double> U(0.0, kTwoPi);
  const double min_gap = kTwoPi / (3.0 * static_cast<double>(n));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> th(n);
    for (auto& t : th) t = U(rng);
    std::sort(th.begin(), th.end());
    std::vector<double> gaps(n);
    for (std::size_t i = 0; i < n; ++i) gaps[i] = (i + 1 < n ? th[i + 1] : th[0] + kTwoPi) - th[i];
    auto sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.front() >= min_gap;
    for (std::size_t i = 0; i + 1 < n && ok; ++i) ok = sorted[i + 1] - sorted[i] > detail::deg(0.5);
    if (!ok) continue;
    std::size_t wide = static_cast<std::size_t>(std::max_element(gaps.begin(), gaps.end()) - gaps.begin());
    double ts = th[wide] + gaps[wide] / 2.0;
    std::vector<Point> pts;
    for (double t : th) pts.push_back(polar(rho, t));
    pts.push_back({0, 0});
    pts.push_back(polar(s_factor * rho, ts));
    return newcomer_from(Configuration::from_points(pts),
                         {{"n", double(n)}, {"rho", rho}, {"seed", double(seed)}, {"s_factor", s_factor}});
  }
  throw InstanceError("could not generate a Newcomer instance");
}

// ---------------------------------------------------------------------------
// Spinning

struct SpinningGeometry {
  Point center;
  double radius = 0.0;
  double alpha = 0.0;
  int orientation = +1;
  std::size_t r0 = 0, r1 = 0;
};

/// r0 and r1 bound the unique minimal gap; r1 is the endpoint whose outer gap is
/// smaller, and the rotation runs from r0 towards r1.
inline std::optional<SpinningGeometry> spinning_geometry(std::span<const Point> pts, const Tolerance& tol = {}) {
  if (pts.size() < 3) return std::nullopt;
  Circle circ;
  try {
    circ = fit_circle(pts, tol);
  } catch (const GeometryError&) {
    return std::nullopt;
  }
  if (!concyclic(pts, circ, tol)) return std::nullopt;
  auto ord = angular_order(pts, circ.center, tol);
  if (ord.ambiguous) return std::nullopt;
  const std::size_t m = ord.order.size();
  const std::size_t k = ord.min_index;  // gap between order[k] and order[k+1]
  const double before = ord.gaps[ord.prev(k)];
  const double after = ord.gaps[ord.next(k)];
  const double ang_tol = std::max(1e-9, tol.eps_rel * kTwoPi * 10);
  if (std::abs(before - after) <= ang_tol) return std::nullopt;
  SpinningGeometry g;
  g.center = circ.center;
  g.radius = circ.radius;
  g.alpha = ord.min_gap;
  const std::size_t lo = ord.order[k], hi = ord.order[(k + 1) % m];
  // Angular order is counterclockwise: lo -> hi is the positive direction.
  if (after < before) {
    g.r0 = lo;
    g.r1 = hi;
    g.orientation = +1;
  } else {
    g.r0 = hi;
    g.r1 = lo;
    g.orientation = -1;
  }
  return g;
}

inline ProblemSpec spinning_from(const Configuration& c, Params params = {}) {
  if (c.size() < 5) throw InstanceError("Spinning needs at least 5 robots");
  auto pts = c.positions();
  auto g = spinning_geometry(pts);
  if (!g) throw InstanceError("Spinning needs concyclic robots with a unique minimal gap and distinct outer gaps");
  ProblemSpec s;
  s.name = "spi";
  s.initial = c;
  s.params = std::move(params);
  s.perpetual = true;
  s.roles = {{"r0", g->r0}, {"r1", g->r1}};
  s.points = {{"center", g->center}};
  s.params["alpha"] = g->alpha;
  s.params["orientation"] = g->orientation;
  s.params["radius"] = g->radius;
  const Point O = g->center;
  const double half = g->alpha / 2.0;
  const int orient = g->orientation;
  auto target = [=](const PhaseContext& ctx, std::size_t i) {
    return rotate_about(ctx.entry.robots[i].position, O, half, orient);
  };
  s.phases.push_back({"rotate", nullptr,
                      [=](std::size_t i, Point x, const PhaseContext& ctx) {
                        return detail::near(x, target(ctx, i), ctx.thr) ||
                               detail::near(x, ctx.entry.robots[i].position, ctx.thr);
                      },
                      [=](const Configuration& k, const PhaseContext& ctx) {
                        for (std::size_t i = 0; i < k.size(); ++i)
                          if (!detail::near(k.robots[i].position, target(ctx, i), ctx.thr)) return false;
                        return true;
                      }});
  return s;
}

inline ProblemSpec spinning_spec_from_angles(const std::vector<double>& degrees, double radius = 1.0) {
  std::vector<Point> pts;
  for (double d : degrees) pts.push_back(polar(radius, detail::deg(d)));
  return spinning_from(Configuration::from_points(pts), {{"radius", radius}});
}

/// Random angles with a unique minimal gap of at least 6 degrees.
inline ProblemSpec spinning_spec(std::size_t n = 6, std::uint64_t seed = 1, double radius = 1.0) {
  if (n < 5) throw InstanceError("Spinning needs n >= 5");
  auto rng = detail::seeded_stream(seed, 0x5B1);
  std::uniform_real_distribution<double> U(0.0, 360.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> th(n);
    for (auto& t : th) t = U(rng);
    std::sort(th.begin(), th.end());
    std::vector<double> gaps(n);
    for (std::size_t i = 0; i < n; ++i) gaps[i] = (i + 1 < n ? th[i + 1] : th[0] + 360.0) - th[i];
    std::size_t k = static_cast<std::size_t>(std::min_element(gaps.begin(), gaps.end()) - gaps.begin());
    auto sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    if (sorted[0] < 6.0 || sorted[1] - sorted[0] < 3.0) continue;
    if (std::abs(gaps[(k + n - 1) % n] - gaps[(k + 1) % n]) < 3.0) continue;
    auto spec = spinning_spec_from_angles(th, radius);
    spec.params["n"] = double(n);
    spec.params["seed"] = double(seed);
    return spec;
  }
  throw InstanceError("could not generate a Spinning instance");
}

// ---------------------------------------------------------------------------
// AngleShift

struct TriangleRoles {
  std::size_t a, b, c;
  double alpha;
  int orientation;
};

/// a has the greatest angle and c the smallest; nullopt for right, obtuse,
/// isosceles or degenerate triangles.
inline std::optional<TriangleRoles> angle_shift_roles(std::span<const Point> pts, const Tolerance& tol = {}) {
  if (pts.size() != 3 || collinear(pts[0], pts[1], pts[2], tol)) return std::nullopt;
  std::array<double, 3> ang{};
  for (std::size_t i = 0; i < 3; ++i) {
    Point u = pts[(i + 1) % 3] - pts[i], v = pts[(i + 2) % 3] - pts[i];
    ang[i] = std::atan2(std::abs(cross(u, v)), dot(u, v));
  }
  const double eps = 1e-7;
  for (std::size_t i = 0; i < 3; ++i) {
    if (ang[i] >= kPi / 2 - eps) return std::nullopt;
    if (std::abs(ang[i] - ang[(i + 1) % 3]) <= eps) return std::nullopt;
  }
  std::array<std::size_t, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return ang[x] > ang[y]; });
  TriangleRoles r{idx[0], idx[1], idx[2], ang[idx[0]], 0};
  r.orientation = cross(pts[r.b] - pts[r.a], pts[r.c] - pts[r.a]) > 0 ? +1 : -1;
  return r;
}

inline ProblemSpec angle_shift_from(const Configuration& cfg, Params params = {}) {
  auto pts = cfg.positions();
  auto roles = angle_shift_roles(pts);
  if (!roles) throw InstanceError("AngleShift needs an acute scalene triangle");
  const Point a = pts[roles->a];
  const Point bt = rotate_about(pts[roles->b], a, roles->alpha, roles->orientation);
  const Point ct = rotate_about(pts[roles->c], a, kPi - roles->alpha, roles->orientation);
  ProblemSpec s;
  s.name = "ash";
  s.initial = cfg;
  s.params = std::move(params);
  s.params["alpha"] = roles->alpha;
  s.roles = {{"a", roles->a}, {"b", roles->b}, {"c", roles->c}};
  s.points = {{"b_target", bt}, {"c_target", ct}};
  // Both chords move concurrently under FSYNC.
  MoveSegment mb{pts[roles->b], bt, 0.25, 0.75}, mc{pts[roles->c], ct, 0.25, 0.75};
  if (check_pair(roles->b, mb, roles->c, mc, true, s.thr()))
    throw InstanceError("AngleShift moves of b and c would collide");
  const std::size_t ib = roles->b, ic = roles->c, ia = roles->a;
  s.phases.push_back({"shift", [=](std::size_t i) { return i == ib || i == ic; },
                      [=](std::size_t i, Point x, const PhaseContext& ctx) {
                        return detail::near(x, i == ib ? bt : ct, ctx.thr);
                      },
                      [=](const Configuration& k, const PhaseContext& ctx) {
                        return detail::near(k.robots[ib].position, bt, ctx.thr) &&
                               detail::near(k.robots[ic].position, ct, ctx.thr) &&
                               detail::near(k.robots[ia].position, a, ctx.thr);
                      }});
  return s;
}

/// a = (0, 0), b = (ab, 0), c at angle alpha with |ac| = ac.
inline ProblemSpec angle_shift_spec(double alpha_deg = 80.0, double ab = 2.0, double ac = 3.0) {
  auto c = Configuration::from_points(std::vector<Point>{{0, 0}, {ab, 0}, polar(ac, detail::deg(alpha_deg))});
  auto spec = angle_shift_from(c, {{"alpha_deg", alpha_deg}, {"ab", ab}, {"ac", ac}});
  if (spec.role("a") != 0) throw InstanceError("the angle at a must be the greatest");
  return spec;
}

// ---------------------------------------------------------------------------
// Pseudo

struct PseudoRoles {
  std::size_t w, a, b, c;
  RegularPolygon polygon;
  std::vector<std::size_t> members;
};

/// Everything the Pseudo problem derives from a configuration with exactly one
/// robot (w) off the pseudo-polygon.
inline std::optional<PseudoRoles> pseudo_roles(std::span<const Point> pts, const Tolerance& tol = {}) {
  const std::size_t total = pts.size();
  for (std::size_t w = 0; w < total; ++w) {
    std::vector<Point> rest;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < total; ++j)
      if (j != w) {
        rest.push_back(pts[j]);
        idx.push_back(j);
      }
    PseudoPolygon pp;
    try {
      pp = associated_polygon(rest, tol);
    } catch (const GeometryError&) {
      continue;
    }
    const auto& N = pp.polygon;
    if (2 * rest.size() < static_cast<std::size_t>(N.n) + 4) continue;
    if (!safe_zone_contains(N, pts[w], tol)) continue;
    std::vector<double> d;
    for (Point p : rest) d.push_back(dist(p, pts[w]));
    auto far = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
    const double thr = tol.at(diameter(pts));
    for (std::size_t j = 0; j < d.size(); ++j)
      if (j != far && std::abs(d[j] - d[far]) <= thr) return std::nullopt;
    int va = nearest_vertex(N, rest[far]);
    std::optional<std::size_t> nb[2];
    for (int dir : {+1, -1}) {
      for (int step = 1; step < N.n && !nb[dir > 0 ? 0 : 1]; ++step) {
        Point v = N.vertex(((va + dir * step) % N.n + N.n) % N.n);
        for (std::size_t j = 0; j < rest.size(); ++j)
          if (dist(rest[j], v) <= thr) nb[dir > 0 ? 0 : 1] = j;
      }
    }
    if (!nb[0] || !nb[1] || *nb[0] == *nb[1]) return std::nullopt;
    std::size_t b = *nb[0], c = *nb[1];
    if (std::abs(d[b] - d[c]) <= thr) return std::nullopt;
    if (d[b] < d[c]) std::swap(b, c);
    return PseudoRoles{w, idx[far], idx[b], idx[c], N, idx};
  }
  return std::nullopt;
}

/// The three conditions a's destination must satisfy.
inline bool pseudo_target_ok(const PseudoRoles& r, std::span<const Point> pts, Point x, const Tolerance& tol = {}) {
  if (!safe_zone_contains(r.polygon, x, tol)) return false;
  const Point a = pts[r.a], b = pts[r.b], c = pts[r.c], w = pts[r.w];
  const double thr = tol.at(diameter(pts));
  const double sa = cross(c - b, a - b), sx = cross(c - b, x - b);
  if (!(sa * sx < 0) || line_distance(b, c, x) <= thr) return false;
  for (std::size_t m : r.members)
    if (m != r.a && line_distance(w, pts[m], x) <= thr) return false;
  return true;
}

inline ProblemSpec pseudo_from(const Configuration& cfg, Params params = {}) {
  auto pts = cfg.positions();
  auto roles = pseudo_roles(pts);
  if (!roles) throw InstanceError("Pseudo needs a pseudo-polygon, a watcher in its safe zone and unique roles");
  ProblemSpec s;
  s.name = "pse";
  s.initial = cfg;
  s.params = std::move(params);
  s.params["n"] = roles->polygon.n;
  s.params["m"] = static_cast<double>(roles->members.size());
  s.roles = {{"w", roles->w}, {"a", roles->a}, {"b", roles->b}, {"c", roles->c}};
  s.points = {{"center", roles->polygon.center}};
  const PseudoRoles r = *roles;
  const std::vector<Point> p0 = pts;
  const Tolerance tol = s.tol;
  auto x_ok = [=](Point x) { return pseudo_target_ok(r, p0, x, tol); };
  s.phases.push_back({"escape", [ia = r.a](std::size_t i) { return i == ia; },
                      [=](std::size_t, Point x, const PhaseContext&) { return x_ok(x); },
                      [=](const Configuration& k, const PhaseContext& ctx) {
                        return x_ok(k.robots[r.a].position) && detail::others_at(k, ctx.initial, r.a, ctx.thr);
                      }});
  return s;
}

inline ProblemSpec pseudo_octagon_spec() {
  std::vector<Point> pts;
  for (int k : {0, 1, 2, 4, 5, 6, 7}) pts.push_back(polar(1.0, detail::deg(22.5 + 45.0 * k)));
  pts.push_back(polar(2.3, detail::deg(265.0)));
  return pseudo_from(Configuration::from_points(pts), {{"n", 8}, {"m", 7}});
}

/// Random m-subset of a unit n-gon with the watcher sampled in the safe zone.
inline ProblemSpec pseudo_spec(std::size_t n = 8, std::size_t m = 7, std::uint64_t seed = 1) {
  if (n < 6) throw InstanceError("Pseudo needs n >= 6");
  if (2 * m < n + 4 || m > n) throw InstanceError("Pseudo needs n/2 + 2 <= m <= n");
  auto rng = detail::seeded_stream(seed, 0x95E);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    RegularPolygon N{{0, 0}, 1.0, static_cast<int>(n), U(rng) * kTwoPi / static_cast<double>(n)};
    std::vector<int> ks(n);
    for (std::size_t k = 0; k < n; ++k) ks[k] = static_cast<int>(k);
    std::shuffle(ks.begin(), ks.end(), rng);
    ks.resize(m);
    std::sort(ks.begin(), ks.end());
    std::vector<Point> pts;
    for (int k : ks) pts.push_back(N.vertex(k));
    const double l = N.edge_length();
    Point w = polar(1.0 + l + U(rng) * 1.5, U(rng) * kTwoPi);
    pts.push_back(w);
    auto roles = pseudo_roles(pts);
    if (!roles || roles->polygon.n != static_cast<int>(n) || roles->w != m) continue;
    // Keep margins comfortably away from the excluded lines.
    bool margin = true;
    for (std::size_t i = 0; i < m && margin; ++i)
      for (std::size_t j = i + 1; j < m && margin; ++j) margin = line_distance(pts[i], pts[j], w) > 0.02;
    if (!margin) continue;
    auto spec = pseudo_from(Configuration::from_points(pts), {{"n", double(n)}, {"m", double(m)}, {"seed", double(seed)}});
    return spec;
  }
  throw InstanceError("could not generate a Pseudo instance");
}

// ---------------------------------------------------------------------------
// LineStretch

inline ProblemSpec line_stretch_spec(std::size_t n = 4, double d = 1.0) {
  if (n <= 3) throw InstanceError("LineStretch needs n > 3");
  if (!(d > 0.0)) throw InstanceError("d must be positive");
  std::vector<Point> pts;
  for (std::size_t k = 0; k < n; ++k) pts.push_back({static_cast<double>(k) * d, 0.0});
  ProblemSpec s;
  s.name = "ls";
  s.initial = Configuration::from_points(pts);
  s.params = {{"n", double(n)}, {"d", d}};
  const std::size_t last = n - 1;
  const Point left = {-d / static_cast<double>(n), 0.0};
  const Point right = {static_cast<double>(last) * d + d / static_cast<double>(n), 0.0};
  s.roles = {{"left", 0}, {"right", last}};
  s.points = {{"left_target", left}, {"right_target", right}};
  const Point l0 = pts.front(), r0 = pts.back();
  s.phases.push_back({"stretch", [last](std::size_t i) { return i == 0 || i == last; },
                      [=](std::size_t i, Point x, const PhaseContext& ctx) {
                        return i == 0 ? segment_distance(l0, left, x) <= ctx.thr
                                      : segment_distance(r0, right, x) <= ctx.thr;
                      },
                      [=](const Configuration& k, const PhaseContext& ctx) {
                        for (std::size_t i = 1; i < last; ++i)
                          if (!detail::near(k.robots[i].position, ctx.initial.robots[i].position, ctx.thr)) return false;
                        return detail::near(k.robots[0].position, left, ctx.thr) &&
                               detail::near(k.robots[last].position, right, ctx.thr);
                      }});
  return s;
}

// ---------------------------------------------------------------------------
// Registry and instance files

struct ProblemInfo {
  std::string name;
  std::string title;
  std::string params;
};

inline std::vector<ProblemInfo> problem_list() {
  return {{"trt", "TriangleRoundTrip", "rho"},
          {"fff", "FlipFlopFlip", "rx, h"},
          {"nwc", "Newcomer", "n, rho, seed, s_factor"},
          {"spi", "Spinning", "n, seed, radius | figure=1"},
          {"ash", "AngleShift", "alpha_deg, ab, ac"},
          {"pse", "Pseudo", "n, m, seed | figure=1"},
          {"ls", "LineStretch", "n, d"}};
}

inline std::string canonical_problem(const std::string& raw) {
  auto s = lower(raw);
  if (s == "trt" || s == "triangle" || s == "triangleroundtrip" || s == "triangle_round_trip") return "trt";
  if (s == "fff" || s == "flipflopflip" || s == "flip_flop_flip") return "fff";
  if (s == "nwc" || s == "newcomer") return "nwc";
  if (s == "spi" || s == "spinning") return "spi";
  if (s == "ash" || s == "angleshift" || s == "angle_shift") return "ash";
  if (s == "pse" || s == "pseudo") return "pse";
  if (s == "ls" || s == "linestretch" || s == "line_stretch") return "ls";
  throw InstanceError("unknown problem: " + raw);
}

inline ProblemSpec make_problem(const std::string& name, const Params& p = {}) {
  using detail::param;
  const auto key = canonical_problem(name);
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 1));
  if (key == "trt") return triangle_round_trip_spec(param(p, "rho", 1.0));
  if (key == "fff") return flip_flop_flip_spec(param(p, "rx", 2.6), param(p, "h", 1.0));
  if (key == "nwc")
    return newcomer_spec(static_cast<std::size_t>(param(p, "n", 7)), param(p, "rho", 2.0), seed, param(p, "s_factor", 1.8));
  if (key == "spi") {
    if (param(p, "figure", 0) != 0) return spinning_spec_from_angles({0, 20, 60, 100, 200, 280}, param(p, "radius", 1.0));
    return spinning_spec(static_cast<std::size_t>(param(p, "n", 6)), seed, param(p, "radius", 1.0));
  }
  if (key == "ash") return angle_shift_spec(param(p, "alpha_deg", 80), param(p, "ab", 2), param(p, "ac", 3));
  if (key == "pse") {
    if (param(p, "figure", 0) != 0) return pseudo_octagon_spec();
    return pseudo_spec(static_cast<std::size_t>(param(p, "n", 8)), static_cast<std::size_t>(param(p, "m", 7)), seed);
  }
  return line_stretch_spec(static_cast<std::size_t>(param(p, "n", 4)), param(p, "d", 1.0));
}

/// Rebuilds a problem from explicit robot positions.
inline ProblemSpec problem_from_configuration(const std::string& name, const Configuration& c, const Params& p = {}) {
  const auto key = canonical_problem(name);
  if (key == "trt") return triangle_round_trip_from(c, p);
  if (key == "fff") return flip_flop_flip_from(c, p);
  if (key == "nwc") return newcomer_from(c, p);
  if (key == "spi") return spinning_from(c, p);
  if (key == "ash") return angle_shift_from(c, p);
  if (key == "pse") return pseudo_from(c, p);
  auto n = c.size();
  auto spec = line_stretch_spec(n, n > 1 ? dist(c.robots[0].position, c.robots[1].position) : 1.0);
  if (!(spec.initial.positions() == c.positions())) throw InstanceError("LineStretch instances must be generated");
  return spec;
}

inline nlohmann::json instance_json(const ProblemSpec& spec) {
  nlohmann::json robots = nlohmann::json::array();
  for (const auto& r : spec.initial.robots) robots.push_back({{"x", r.position.x}, {"y", r.position.y}});
  return {{"problem", spec.name}, {"params", spec.params}, {"robots", robots}};
}

inline ProblemSpec problem_from_json(const nlohmann::json& j) {
  Configuration c;
  for (const auto& r : j.at("robots")) c.robots.push_back({{r.at("x").get<double>(), r.at("y").get<double>()}, kOff});
  Params p;
  if (j.contains("params")) p = j.at("params").get<Params>();
  return problem_from_configuration(j.at("problem").get<std::string>(), c, p);
}

}  // namespace opaque_swarm
