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
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opaque_swarm/geom.hpp"

namespace opaque_swarm {

enum class LightClass { kOblot, kFsta, kFcom, kLumi };
enum class SyncMode { kAsync, kSsync, kFsync };

inline bool has_internal_light(LightClass l) { return l == LightClass::kFsta || l == LightClass::kLumi; }
inline bool has_external_light(LightClass l) { return l == LightClass::kFcom || l == LightClass::kLumi; }

struct ModelId {
  LightClass light = LightClass::kOblot;
  SyncMode sync = SyncMode::kAsync;

  friend bool operator==(const ModelId&, const ModelId&) = default;
};

inline constexpr std::array<LightClass, 4> kLightClasses = {LightClass::kOblot, LightClass::kFsta,
                                                           LightClass::kFcom, LightClass::kLumi};
inline constexpr std::array<SyncMode, 3> kSyncModes = {SyncMode::kAsync, SyncMode::kSsync,
                                                      SyncMode::kFsync};

inline std::vector<ModelId> all_models() {
  std::vector<ModelId> out;
  for (auto s : kSyncModes)
    for (auto l : kLightClasses) out.push_back({l, s});
  return out;
}

inline std::string_view to_string(LightClass l) {
  switch (l) {
    case LightClass::kOblot: return "OBLOT";
    case LightClass::kFsta: return "FSTA";
    case LightClass::kFcom: return "FCOM";
    case LightClass::kLumi: return "LUMI";
  }
  return "?";
}

inline std::string_view to_string(SyncMode s) {
  switch (s) {
    case SyncMode::kFsync: return "F";
    case SyncMode::kSsync: return "S";
    case SyncMode::kAsync: return "A";
  }
  return "?";
}

inline std::string to_string(const ModelId& m) {
  return std::string(to_string(m.light)) + "^" + std::string(to_string(m.sync));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::optional<LightClass> parse_light(std::string_view s) {
  auto v = lower(s);
  if (v == "oblot") return LightClass::kOblot;
  if (v == "fsta") return LightClass::kFsta;
  if (v == "fcom") return LightClass::kFcom;
  if (v == "lumi") return LightClass::kLumi;
  return std::nullopt;
}

inline std::optional<SyncMode> parse_sync(std::string_view s) {
  auto v = lower(s);
  if (v == "f" || v == "fsync") return SyncMode::kFsync;
  if (v == "s" || v == "ssync") return SyncMode::kSsync;
  if (v == "a" || v == "async") return SyncMode::kAsync;
  return std::nullopt;
}

/// Accepts "lumi,async", "LUMI^A" and "lumi^async".
inline std::optional<ModelId> parse_model(std::string_view s) {
  auto sep = s.find_first_of(",^");
  if (sep == std::string_view::npos) return std::nullopt;
  auto l = parse_light(s.substr(0, sep));
  auto y = parse_sync(s.substr(sep + 1));
  if (!l || !y) return std::nullopt;
  return ModelId{*l, *y};
}

using Color = std::string;
inline const Color kOff = "off";

struct Robot {
  Point position;
  Color light = kOff;

  friend bool operator==(const Robot&, const Robot&) = default;
};

/// Robot indices are simulator identities; algorithms never see them.
struct Configuration {
  std::vector<Robot> robots;

  std::size_t size() const { return robots.size(); }
  std::vector<Point> positions() const {
    std::vector<Point> p;
    p.reserve(robots.size());
    for (const auto& r : robots) p.push_back(r.position);
    return p;
  }
  static Configuration from_points(std::span<const Point> pts) {
    Configuration c;
    for (Point p : pts) c.robots.push_back({p, kOff});
    return c;
  }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Maps global coordinates into an observer's private view:
/// p -> scale * R(rotation) * M(reflect) * (p - origin), M mirroring the y axis sign.
struct LocalFrame {
  double rotation = 0.0;
  bool reflect = false;
  double scale = 1.0;
  Point origin;

  Point to_local(Point p) const {
    Point v = p - origin;
    if (reflect) v.y = -v.y;
    double c = std::cos(rotation), s = std::sin(rotation);
    return scale * Point{c * v.x - s * v.y, s * v.x + c * v.y};
  }
  Point to_global(Point q) const {
    Point v = q / scale;
    double c = std::cos(rotation), s = std::sin(rotation);
    Point w{c * v.x + s * v.y, -s * v.x + c * v.y};
    if (reflect) w.y = -w.y;
    return origin + w;
  }

  /// Uniform rotation, fair-coin chirality, log-uniform scale in [0.1, 10].
  template <class Rng>
  static LocalFrame sample(Point origin, Rng& rng) {
    std::uniform_real_distribution<double> rot(0.0, kTwoPi);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> logscale(std::log(0.1), std::log(10.0));
    LocalFrame f;
    f.rotation = rot(rng);
    f.reflect = coin(rng);
    f.scale = std::exp(logscale(rng));
    f.origin = origin;
    return f;
  }
};

inline Point frame_to_global(const LocalFrame& frame, Point local) { return frame.to_global(local); }

struct SnapshotEntry {
  Point position;
  std::optional<Color> color;

  friend bool operator==(const SnapshotEntry&, const SnapshotEntry&) = default;
};

struct Snapshot {
  std::vector<SnapshotEntry> visible;
  std::optional<Color> own_internal;
  bool transparent_mode = false;

  std::vector<Point> points() const {
    std::vector<Point> p;
    p.reserve(visible.size());
    for (const auto& e : visible) p.push_back(e.position);
    return p;
  }
};

/// Indices j != observer that the observer can see at the given instant.
inline std::vector<std::size_t> visible_set(std::span<const Point> positions, std::size_t observer,
                                            bool transparent, const Tolerance& tol = {}) {
  std::vector<std::size_t> out;
  const Point o = positions[observer];
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == observer) continue;
    bool hidden = false;
    if (!transparent) {
      for (std::size_t k = 0; k < positions.size() && !hidden; ++k)
        if (k != observer && k != j && blocks(o, positions[j], positions[k], tol)) hidden = true;
    }
    if (!hidden) out.push_back(j);
  }
  return out;
}

/// Builds what `observer` perceives. When `shuffle_rng` is given the entries are
/// presented in a random order.
template <class Rng = std::mt19937_64>
Snapshot take_snapshot(std::span<const Point> positions, std::span<const Color> lights,
                       std::size_t observer, const LocalFrame& frame, const ModelId& model,
                       bool transparent, const Tolerance& tol = {}, Rng* shuffle_rng = nullptr) {
  Snapshot snap;
  snap.transparent_mode = transparent;
  for (std::size_t j : visible_set(positions, observer, transparent, tol)) {
    SnapshotEntry e{frame.to_local(positions[j]), std::nullopt};
    if (has_external_light(model.light)) e.color = lights[j];
    snap.visible.push_back(std::move(e));
  }
  if (has_internal_light(model.light)) snap.own_internal = lights[observer];
  if (shuffle_rng != nullptr) std::shuffle(snap.visible.begin(), snap.visible.end(), *shuffle_rng);
  return snap;
}

/// Every pair of robots closer than the tolerance; empty means the configuration is valid.
inline std::vector<std::pair<std::size_t, std::size_t>> validate_configuration(
    const Configuration& config, const Tolerance& tol = {}) {
  auto pts = config.positions();
  const double thr = tol.at(diameter(pts));
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (dist(pts[i], pts[j]) <= thr) bad.emplace_back(i, j);
  return bad;
}

}  // namespace opaque_swarm
