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

// Witness algorithms. Every decide() works in the observer's local frame, where
// the observer sits at the origin.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opaque_swarm/engine.hpp"
#include "opaque_swarm/geom.hpp"
#include "opaque_swarm/model.hpp"
#include "opaque_swarm/problems.hpp"

namespace opaque_swarm {

namespace algo {

inline constexpr Point kSelf{0.0, 0.0};

inline Decision stay(std::optional<Color> c = std::nullopt) { return {kSelf, std::move(c)}; }

inline std::vector<ModelId> models(std::initializer_list<LightClass> lights, std::initializer_list<SyncMode> syncs) {
  std::vector<ModelId> out;
  for (auto s : syncs)
    for (auto l : lights) out.push_back({l, s});
  return out;
}

inline const std::initializer_list<SyncMode> kAllSync = {SyncMode::kAsync, SyncMode::kSsync, SyncMode::kFsync};

/// Observer followed by every visible robot.
inline std::vector<Point> with_self(const Snapshot& s) {
  std::vector<Point> pts{kSelf};
  for (const auto& e : s.visible) pts.push_back(e.position);
  return pts;
}

inline double threshold(const Snapshot& s, const Tolerance& tol = {}) { return tol.at(diameter(with_self(s))); }

inline Color color_of(const SnapshotEntry& e) { return e.color.value_or(kOff); }

inline std::set<Color> visible_colors(const Snapshot& s) {
  std::set<Color> out;
  for (const auto& e : s.visible) out.insert(color_of(e));
  return out;
}

inline bool sees(const Snapshot& s, const Color& c) { return visible_colors(s).count(c) > 0; }

/// Three robots p, q plus the observer with |p| = |q| and angle(p, q) = 120 degrees.
inline bool center_of_two(Point p, Point q, double thr) {
  return std::abs(norm(p) - norm(q)) <= thr && std::abs(dist(p, q) - std::sqrt(3.0) * norm(p)) <= thr;
}

inline bool equilateral(Point p, Point q, double thr) {
  double a = norm(p), b = norm(q), c = dist(p, q);
  return std::abs(a - b) <= thr && std::abs(a - c) <= thr && std::abs(b - c) <= thr;
}

}  // namespace algo

// ---------------------------------------------------------------------------
// TriangleRoundTrip

class TrtFsta : public Algorithm {
 public:
  std::string name() const override { return "trt_fsta"; }
  std::vector<Color> palette() const override { return {kOff, "went"}; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kFsta, LightClass::kLumi}, algo::kAllSync);
  }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() != 2) return algo::stay();
    const Point p = s.visible[0].position, q = s.visible[1].position;
    const double thr = algo::threshold(s);
    const Color me = s.own_internal.value_or(kOff);
    if (me == kOff && algo::center_of_two(p, q, thr)) return {-1.0 * (p + q), "went"};
    if (me == "went" && algo::equilateral(p, q, thr)) return {(p + q) / 3.0, "went"};
    return algo::stay();
  }
};

/// Vertex robots acknowledge the mover with B; the robot that sees two B robots
/// in an equilateral triangle is the mover and returns.
class TrtFcom : public Algorithm {
 public:
  std::string name() const override { return "trt_fcom"; }
  std::vector<Color> palette() const override { return {kOff, "M", "B", "D"}; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kFcom, LightClass::kLumi}, algo::kAllSync);
  }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() != 2) return algo::stay();
    const auto& e0 = s.visible[0];
    const auto& e1 = s.visible[1];
    const Point p = e0.position, q = e1.position;
    const Color cp = algo::color_of(e0), cq = algo::color_of(e1);
    const double thr = algo::threshold(s);
    if (algo::center_of_two(p, q, thr) && cp == kOff && cq == kOff) return {-1.0 * (p + q), "M"};
    if (!algo::equilateral(p, q, thr)) return algo::stay();
    if (cp == "M" || cq == "M") return algo::stay("B");
    if (cp == "B" && cq == "B") return {(p + q) / 3.0, "D"};
    return algo::stay();
  }
};

// ---------------------------------------------------------------------------
// FlipFlopFlip

namespace algo {

/// Destination of r for one action, with p, q visible and r at the origin.
inline Point fff_action(Point p, Point q, const Color& phase) {
  const Point b = 0.5 * (p + q);
  const double d = norm(b), u = dist(p, q);
  const Point toward_b = b / d;
  if (phase == "flop") return b - (d + u) * toward_b;
  if (phase == "flip2") return b + (d - u) * toward_b;
  return p + q;
}

inline Color fff_next(const Color& phase) {
  if (phase == "flop") return "flip2";
  if (phase == "flip2") return "flip1";
  return "flop";
}

/// r is the observer when it is equidistant from the two robots it sees.
inline bool is_fff_r(Point p, Point q, double thr) { return std::abs(norm(p) - norm(q)) <= thr; }

}  // namespace algo

class FffFsta : public Algorithm {
 public:
  std::string name() const override { return "fff_fsta"; }
  std::vector<Color> palette() const override { return {kOff, "flip1", "flop", "flip2"}; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kFsta, LightClass::kLumi}, algo::kAllSync);
  }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() != 2) return algo::stay();
    const Point p = s.visible[0].position, q = s.visible[1].position;
    if (!algo::is_fff_r(p, q, algo::threshold(s))) return algo::stay();
    const Color phase = s.own_internal.value_or(kOff);
    return {algo::fff_action(p, q, phase), algo::fff_next(phase)};
  }
};

/// All robots advance one shared external color per round; off reads as flip1.
class FffFcomFsync : public Algorithm {
 public:
  std::string name() const override { return "fff_fcom_fsync"; }
  std::vector<Color> palette() const override { return {kOff, "flip1", "flop", "flip2"}; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kFcom, LightClass::kLumi}, {SyncMode::kFsync});
  }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() != 2) return algo::stay();
    const auto& e0 = s.visible[0];
    const auto& e1 = s.visible[1];
    const double thr = algo::threshold(s);
    auto phase_of = [](const SnapshotEntry& e) {
      Color c = algo::color_of(e);
      return c == kOff ? Color("flip1") : c;
    };
    if (algo::is_fff_r(e0.position, e1.position, thr)) {
      Color phase = std::min(phase_of(e0), phase_of(e1));
      return {algo::fff_action(e0.position, e1.position, phase), algo::fff_next(phase)};
    }
    // The other non-r robot is the one not equidistant from the observer and its peer.
    const bool e0_is_r = std::abs(norm(e0.position) - dist(e0.position, e1.position)) <= thr;
    const auto& peer = e0_is_r ? e1 : e0;
    return algo::stay(algo::fff_next(phase_of(peer)));
  }
};

/// Geometry-only rule: the action is encoded in dist(p, r) relative to u = dist(p, q).
class FffMemoryless : public Algorithm {
 public:
  explicit FffMemoryless(double k = 2.0, double h = 4.0) : k_(k), h_(h) {}
  std::string name() const override { return "fff_memoryless"; }
  std::vector<ModelId> compatible() const override { return algo::models({LightClass::kOblot}, algo::kAllSync); }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() != 2) return algo::stay();
    const Point p = s.visible[0].position, q = s.visible[1].position;
    if (!algo::is_fff_r(p, q, algo::threshold(s))) return algo::stay();
    const Point b = 0.5 * (p + q);
    const double u = dist(p, q), half = u / 2.0;
    const Point toward_b = unit(b);
    // Distance from b that puts dist(p, r) at the requested multiple of u.
    auto at_ratio = [&](double ratio) { return std::sqrt(std::max(0.0, ratio * ratio * u * u - half * half)); };
    const double D = norm(p);
    if (D < k_ * u) return {b + at_ratio((k_ + h_) / 2.0) * toward_b};
    if (D < h_ * u) return {b - at_ratio(h_ + 1.0) * toward_b};
    return {b + at_ratio((1.0 + k_) / 2.0) * toward_b};
  }

 private:
  double k_, h_;
};

// ---------------------------------------------------------------------------
// Newcomer

namespace algo {

/// Largest set of robots (by index into pts) at a common distance from `from`.
inline std::vector<std::size_t> equidistant_group(const std::vector<Point>& pts, Point from, std::size_t skip,
                                                  double thr) {
  std::vector<std::size_t> best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == skip) continue;
    const double r = dist(pts[i], from);
    std::vector<std::size_t> g;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != skip && std::abs(dist(pts[j], from) - r) <= thr) g.push_back(j);
    if (g.size() > best.size()) best = g;
  }
  return best;
}

}  // namespace algo

class NwcFcom : public Algorithm {
 public:
  std::string name() const override { return "nwc_fcom"; }
  std::vector<Color> palette() const override { return {kOff, "s"}; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kFcom, LightClass::kLumi}, algo::kAllSync);
  }
  Decision decide(const Snapshot& s) const override {
    std::vector<Point> pts;
    for (const auto& e : s.visible) pts.push_back(e.position);
    const double thr = algo::threshold(s);
    const std::size_t none = pts.size();
    auto around_me = algo::equidistant_group(pts, algo::kSelf, none, thr);
    if (around_me.size() >= 7) {
      for (auto j : around_me)
        if (algo::color_of(s.visible[j]) == "s") return {pts[j] / 2.0, std::nullopt};
      return algo::stay();
    }
    for (std::size_t y = 0; y < pts.size(); ++y) {
      auto g = algo::equidistant_group(pts, pts[y], y, thr);
      if (g.size() < 4) continue;
      const double r = dist(pts[g.front()], pts[y]);
      const double mine = norm(pts[y]);
      if (mine > r + thr) return {pts[y] * (1.0 - r / mine), "s"};
    }
    return algo::stay();
  }
};

// ---------------------------------------------------------------------------
// Spinning

class SpiOblotFsync : public Algorithm {
 public:
  std::string name() const override { return "spi_oblot_fsync"; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kOblot, LightClass::kFsta, LightClass::kFcom, LightClass::kLumi},
                        {SyncMode::kFsync});
  }
  Decision decide(const Snapshot& s) const override {
    auto pts = algo::with_self(s);
    auto g = spinning_geometry(pts);
    if (!g) return algo::stay();
    return {rotate_about(algo::kSelf, g->center, g->alpha / 2.0, g->orientation)};
  }
};

class SpiLumiAsync : public Algorithm {
 public:
  std::string name() const override { return "spi_lumi_async"; }
  std::vector<Color> palette() const override {
    return {kOff, "a0", "a1", "moving0", "moving1", "m0", "m1", "moving", "moved", "end"};
  }
  std::vector<ModelId> compatible() const override { return algo::models({LightClass::kLumi}, algo::kAllSync); }

  Decision decide(const Snapshot& s) const override {
    const Color me = s.own_internal.value_or(kOff);
    const auto seen = algo::visible_colors(s);
    auto only = [&](std::initializer_list<const char*> allowed) {
      for (const auto& c : seen)
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return c == a; })) return false;
      return true;
    };
    if (me == "moving0") return algo::stay("m0");
    if (me == "moving1") return algo::stay("m1");
    if (me == "moving") return algo::stay("moved");
    if (me == "m0" || me == "m1" || me == "moved") {
      if (only({"m0", "m1", "moved", "end"})) return algo::stay("end");
      return algo::stay();
    }
    if (me == "end") {
      if (only({"end", "off"})) return algo::stay(kOff);
      return algo::stay();
    }

    // Circle from the robots known to be parked on it.
    std::vector<Point> on_circle{algo::kSelf};
    for (const auto& e : s.visible) {
      Color c = algo::color_of(e);
      if (c != "moving" && c != "moving0" && c != "moving1") on_circle.push_back(e.position);
    }
    auto find = [&](const char* color) -> std::optional<Point> {
      for (const auto& e : s.visible)
        if (algo::color_of(e) == color) return e.position;
      return std::nullopt;
    };
    auto circle = [&]() -> std::optional<Circle> {
      if (on_circle.size() < 3) return std::nullopt;
      try {
        Circle c = fit_circle(on_circle);
        if (!concyclic(on_circle, c)) return std::nullopt;
        return c;
      } catch (const GeometryError&) {
        return std::nullopt;
      }
    };
    // Rotation of the observer by `angle` in the direction from `from` to `to` about O.
    auto rotate_self = [](Point O, Point from, Point to, double angle) {
      int dir = cross(from - O, to - O) > 0 ? +1 : -1;
      return rotate_about(algo::kSelf, O, angle, dir);
    };
    auto angle_between = [](Point O, Point u, Point v) {
      Point a = u - O, b = v - O;
      return std::atan2(std::abs(cross(a, b)), dot(a, b));
    };

    if (me == "a0") {
      auto a1 = find("a1");
      auto c = circle();
      if (!a1 || !c) return algo::stay();
      return {rotate_self(c->center, algo::kSelf, *a1, angle_between(c->center, algo::kSelf, *a1) / 2.0), "moving0"};
    }
    if (me == "a1") {
      auto m0 = find("m0");
      auto c = circle();
      if (!m0 || !c) return algo::stay();
      return {rotate_self(c->center, *m0, algo::kSelf, angle_between(c->center, *m0, algo::kSelf)), "moving1"};
    }
    // me == off
    if (seen.count("moving0") || seen.count("moving1")) return algo::stay();
    auto m0 = find("m0"), m1 = find("m1");
    if (m0 && m1) {
      auto c = circle();
      if (!c) return algo::stay();
      return {rotate_self(c->center, *m0, *m1, angle_between(c->center, *m0, *m1) / 2.0), "moving"};
    }
    const bool fresh = only({"off"});
    const bool claiming = only({"off", "a0", "a1"}) && (seen.count("a0") || seen.count("a1"));
    if (!fresh && !claiming) return algo::stay();
    auto g = spinning_geometry(algo::with_self(s));
    if (!g) return algo::stay();
    if (g->r0 == 0 && !seen.count("a0")) return algo::stay("a0");
    if (g->r1 == 0 && !seen.count("a1")) return algo::stay("a1");
    return algo::stay();
  }
};

// ---------------------------------------------------------------------------
// AngleShift

class AshOblotFsync : public Algorithm {
 public:
  std::string name() const override { return "ash_oblot_fsync"; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kOblot, LightClass::kFsta, LightClass::kFcom, LightClass::kLumi},
                        {SyncMode::kFsync});
  }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() != 2) return algo::stay();
    auto pts = algo::with_self(s);
    auto r = angle_shift_roles(pts);
    if (!r) return algo::stay();
    if (r->b == 0) return {rotate_about(algo::kSelf, pts[r->a], r->alpha, r->orientation)};
    if (r->c == 0) return {rotate_about(algo::kSelf, pts[r->a], kPi - r->alpha, r->orientation)};
    return algo::stay();
  }
};

// ---------------------------------------------------------------------------
// Pseudo

namespace algo {

/// Destination for the elected robot: a point on the ray from a through a point
/// of line(b, c) beyond c, so the path passes behind c as seen from b. The first
/// candidate meeting the three target conditions with clear margins wins.
inline std::optional<Point> pseudo_destination(const PseudoRoles& r, const std::vector<Point>& pts) {
  const Point a = pts[r.a], b = pts[r.b], c = pts[r.c], w = pts[r.w];
  const double ell = r.polygon.edge_length();
  const double margin = ell / 50.0;
  for (double s : {0.5, 0.75, 1.0, 0.35, 1.5, 2.0, 0.2, 3.0}) {
    const Point through = c + s * (c - b);
    for (double lambda : {2.0, 2.5, 3.0, 1.6, 4.0, 5.0}) {
      const Point x = a + lambda * (through - a);
      if (!pseudo_target_ok(r, pts, x)) continue;
      if (dist(x, r.polygon.center) < r.polygon.radius + ell) continue;
      bool clear = line_distance(b, c, x) > margin;
      for (std::size_t m : r.members)
        if (m != r.a) clear = clear && line_distance(w, pts[m], x) > margin;
      const int n = r.polygon.n;
      for (int i = 0; i < n && clear; ++i)
        for (int j = i + 1; j < n && clear; ++j)
          clear = line_distance(r.polygon.vertex(i), r.polygon.vertex(j), x) > margin;
      for (int i = 0; i < n && clear; ++i) {
        Point u = r.polygon.vertex(i), v = r.polygon.vertex(i + 1);
        clear = std::abs(dist(x, u) - dist(x, v)) > margin;
      }
      for (std::size_t j = 0; j < pts.size() && clear; ++j)
        if (j != r.a) clear = segment_distance(a, x, pts[j]) > ell / 10.0;
      if (clear) return x;
    }
  }
  return std::nullopt;
}

}  // namespace algo

/// Movements are fixed by geometry alone; only synchronous schedules keep the
/// election sound.
class PseOblotSync : public Algorithm {
 public:
  explicit PseOblotSync(std::string name = "pse_oblot_sync") : name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::vector<ModelId> compatible() const override {
    if (name_ != "pse_oblot_sync") return all_models();
    return algo::models({LightClass::kOblot, LightClass::kFsta, LightClass::kFcom, LightClass::kLumi},
                        {SyncMode::kSsync, SyncMode::kFsync});
  }
  Decision decide(const Snapshot& s) const override {
    auto pts = algo::with_self(s);
    auto r = pseudo_roles(pts);
    if (!r || r->a != 0) return algo::stay();
    auto x = algo::pseudo_destination(*r, pts);
    if (!x) return algo::stay();
    return {*x};
  }

 private:
  std::string name_;
};

class PseFcomAsync : public Algorithm {
 public:
  std::string name() const override { return "pse_fcom_async"; }
  std::vector<Color> palette() const override { return {kOff, "on", "a", "b"}; }
  std::vector<ModelId> compatible() const override {
    return algo::models({LightClass::kFcom, LightClass::kLumi}, algo::kAllSync);
  }
  Decision decide(const Snapshot& s) const override {
    auto pts = algo::with_self(s);
    const auto V = algo::visible_colors(s);
    if (V.count(kOff)) {
      auto r = pseudo_roles(pts);
      if (!r) return algo::stay();
      if (r->a == 0) return algo::stay("a");
      if (r->b == 0) return algo::stay("b");
      return algo::stay("on");
    }
    const std::set<Color> abo{"a", "b", "on"}, ao{"a", "on"}, bo{"b", "on"}, o{"on"};
    if (V == abo) return algo::stay("on");
    if (V == ao) return algo::stay("b");
    if (V == o) return algo::stay("b");
    if (V == bo) {
      auto r = pseudo_roles(pts);
      if (!r || r->a != 0) return algo::stay();
      auto x = algo::pseudo_destination(*r, pts);
      if (!x) return algo::stay();
      return {*x, "a"};
    }
    return algo::stay();
  }
};

// ---------------------------------------------------------------------------
// LineStretch

class LsOblotTransparent : public Algorithm {
 public:
  std::string name() const override { return "ls_oblot_transparent"; }
  std::vector<ModelId> compatible() const override { return all_models(); }
  Decision decide(const Snapshot& s) const override {
    if (s.visible.size() < 3) return algo::stay();
    auto pts = algo::with_self(s);
    const double thr = algo::threshold(s);
    Point near = s.visible[0].position;
    for (const auto& e : s.visible)
      if (norm(e.position) < norm(near)) near = e.position;
    const Point dir = unit(near);
    std::vector<double> along;
    for (const auto& e : s.visible) {
      if (line_distance(algo::kSelf, near, e.position) > thr) return algo::stay();
      along.push_back(dot(e.position, dir));
    }
    if (std::any_of(along.begin(), along.end(), [&](double t) { return t < -thr; })) return algo::stay();
    std::sort(along.begin(), along.end());
    const double d = along[1] - along[0];
    if (std::abs(along[0] - d) > thr) return algo::stay();
    const double n = static_cast<double>(pts.size());
    return {-(d / n) * dir};
  }
};

// ---------------------------------------------------------------------------
// Registry

struct AlgorithmInfo {
  std::string name;
  std::string problem;
  ModelId weakest;
  bool transparent = false;
  bool positive = true;
};

inline std::vector<AlgorithmInfo> algorithm_list() {
  using L = LightClass;
  using S = SyncMode;
  return {
      {"trt_fsta", "trt", {L::kFsta, S::kAsync}},
      {"trt_fcom", "trt", {L::kFcom, S::kAsync}},
      {"fff_fsta", "fff", {L::kFsta, S::kAsync}},
      {"fff_fcom_fsync", "fff", {L::kFcom, S::kFsync}},
      {"nwc_fcom", "nwc", {L::kFcom, S::kAsync}},
      {"spi_oblot_fsync", "spi", {L::kOblot, S::kFsync}},
      {"spi_lumi_async", "spi", {L::kLumi, S::kAsync}},
      {"ash_oblot_fsync", "ash", {L::kOblot, S::kFsync}},
      {"pse_oblot_sync", "pse", {L::kOblot, S::kSsync}},
      {"pse_fcom_async", "pse", {L::kFcom, S::kAsync}},
      {"ls_oblot_transparent", "ls", {L::kOblot, S::kAsync}, true},
      {"fff_memoryless", "fff", {L::kOblot, S::kSsync}, false, false},
      {"pse_internal_only", "pse", {L::kOblot, S::kAsync}, false, false},
      {"null", "", {L::kOblot, S::kAsync}, false, false},
  };
}

inline std::optional<AlgorithmInfo> algorithm_info(const std::string& name) {
  for (auto& a : algorithm_list())
    if (a.name == name) return a;
  return std::nullopt;
}

inline std::unique_ptr<Algorithm> make_algorithm(const std::string& name) {
  if (name == "trt_fsta") return std::make_unique<TrtFsta>();
  if (name == "trt_fcom") return std::make_unique<TrtFcom>();
  if (name == "fff_fsta") return std::make_unique<FffFsta>();
  if (name == "fff_fcom_fsync") return std::make_unique<FffFcomFsync>();
  if (name == "fff_memoryless") return std::make_unique<FffMemoryless>();
  if (name == "nwc_fcom") return std::make_unique<NwcFcom>();
  if (name == "spi_oblot_fsync") return std::make_unique<SpiOblotFsync>();
  if (name == "spi_lumi_async") return std::make_unique<SpiLumiAsync>();
  if (name == "ash_oblot_fsync") return std::make_unique<AshOblotFsync>();
  if (name == "pse_oblot_sync") return std::make_unique<PseOblotSync>();
  if (name == "pse_internal_only") return std::make_unique<PseOblotSync>("pse_internal_only");
  if (name == "pse_fcom_async") return std::make_unique<PseFcomAsync>();
  if (name == "ls_oblot_transparent") return std::make_unique<LsOblotTransparent>();
  if (name == "null") return std::make_unique<NullAlgorithm>();
  return nullptr;
}

}  // namespace opaque_swarm
