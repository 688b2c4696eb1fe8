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

// Static SVG rendering of traces.

#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "opaque_swarm/engine.hpp"

namespace opaque_swarm {

struct RenderOptions {
  /// Draw only the configuration at this time.
  std::optional<double> at;
  double width = 640;
  double margin = 40;
  bool time_labels = true;
  /// Moves beyond this count are drawn without labels.
  std::size_t max_labels = 200;
};

namespace render_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fill_for(const Color& c) {
  static const std::map<std::string, std::string> named{
      {"off", "#9e9e9e"},   {"went", "#e53935"}, {"start", "#9e9e9e"}, {"flip1", "#1e88e5"},
      {"flop", "#43a047"},  {"flip2", "#8e24aa"}, {"s", "#fb8c00"},    {"done", "#6d4c41"},
      {"wait", "#fdd835"},  {"move", "#e53935"},  {"a", "#00897b"},    {"b", "#3949ab"},
      {"c", "#d81b60"},     {"w", "#546e7a"}};
  if (auto it = named.find(c); it != named.end()) return it->second;
  static const char* cycle[] = {"#00acc1", "#7cb342", "#f4511e", "#5e35b1", "#c0ca33", "#ec407a",
                                "#26a69a", "#ffb300", "#8d6e63", "#78909c"};
  std::size_t h = 0;
  for (unsigned char ch : c) h = h * 131 + ch;
  return cycle[h % (sizeof cycle / sizeof *cycle)];
}

struct View {
  double min_x, min_y, scale, margin, height;
  double x(double v) const { return margin + (v - min_x) * scale; }
  double y(double v) const { return height - margin - (v - min_y) * scale; }
};

}  // namespace render_detail

/// Initial configuration as hollow circles, final configuration filled with its
/// light colors, moves as segments labelled with their start time.
inline std::string render_svg(const Trace& trace, const RenderOptions& opt = {}) {
  using namespace render_detail;
  std::vector<Point> pts = trace.initial.positions();
  std::vector<MoveSegment> moves;
  Configuration shown;
  if (opt.at) {
    shown = configuration_at(trace, *opt.at);
  } else {
    shown = trace.events.empty() ? trace.initial : trace.final;
    for (const auto& e : trace.events)
      if (e.kind == EventKind::kMoveStart && e.from != e.to) moves.push_back({e.from, e.to, e.t, e.t_end});
  }
  for (const auto& r : shown.robots) pts.push_back(r.position);
  for (const auto& m : moves) pts.push_back(m.to);

  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (auto p : pts) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  if (pts.empty()) min_x = min_y = max_x = max_y = 0;
  double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  double inner = opt.width - 2 * opt.margin;
  double scale = inner / span;
  double height = (max_y - min_y) * scale + 2 * opt.margin + 60;
  View v{min_x, min_y, scale, opt.margin, height - 60};
  double radius = std::clamp(inner / 80.0, 3.0, 8.0);

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(opt.width) << "\" height=\"" << num(height)
    << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(opt.margin) << "\" y=\"16\">" << escape(trace.algorithm) << " under "
    << escape(to_string(trace.model)) << ", seed " << trace.seed;
  if (opt.at) s << ", t = " << num(*opt.at);
  s << "</text>\n";

  if (!opt.at) {
    s << "<g stroke=\"#90a4ae\" stroke-width=\"1\" fill=\"none\">\n";
    for (const auto& r : trace.initial.robots)
      s << "<circle cx=\"" << num(v.x(r.position.x)) << "\" cy=\"" << num(v.y(r.position.y)) << "\" r=\""
        << num(radius) << "\"/>\n";
    s << "</g>\n<g stroke=\"#455a64\" stroke-width=\"1\">\n";
    for (const auto& m : moves)
      s << "<line x1=\"" << num(v.x(m.from.x)) << "\" y1=\"" << num(v.y(m.from.y)) << "\" x2=\"" << num(v.x(m.to.x))
        << "\" y2=\"" << num(v.y(m.to.y)) << "\"/>\n";
    s << "</g>\n";
    if (opt.time_labels && moves.size() <= opt.max_labels) {
      s << "<g fill=\"#455a64\" font-size=\"8\">\n";
      for (const auto& m : moves) {
        Point mid = (m.from + m.to) * 0.5;
        s << "<text x=\"" << num(v.x(mid.x) + 2) << "\" y=\"" << num(v.y(mid.y) - 2) << "\">t=" << num(m.t_start)
          << "</text>\n";
      }
      s << "</g>\n";
    }
  }

  std::set<Color> used;
  s << "<g stroke=\"black\" stroke-width=\"0.5\">\n";
  for (std::size_t i = 0; i < shown.robots.size(); ++i) {
    const auto& r = shown.robots[i];
    used.insert(r.light);
    s << "<circle cx=\"" << num(v.x(r.position.x)) << "\" cy=\"" << num(v.y(r.position.y)) << "\" r=\""
      << num(radius) << "\" fill=\"" << fill_for(r.light) << "\"/>\n";
  }
  s << "</g>\n<g fill=\"black\" font-size=\"8\">\n";
  for (std::size_t i = 0; i < shown.robots.size(); ++i) {
    const auto& p = shown.robots[i].position;
    s << "<text x=\"" << num(v.x(p.x) + radius + 1) << "\" y=\"" << num(v.y(p.y) + radius + 1) << "\">" << i
      << "</text>\n";
  }
  s << "</g>\n";

  double lx = opt.margin, ly = height - 24;
  s << "<g>\n";
  for (const auto& c : used) {
    s << "<circle cx=\"" << num(lx) << "\" cy=\"" << num(ly) << "\" r=\"5\" fill=\"" << fill_for(c)
      << "\" stroke=\"black\" stroke-width=\"0.5\"/>";
    s << "<text x=\"" << num(lx + 8) << "\" y=\"" << num(ly + 3) << "\">" << escape(c) << "</text>\n";
    lx += 16 + 7.0 * static_cast<double>(c.size());
  }
  s << "</g>\n";
  for (const auto& viol : trace.violations) {
    s << "<circle cx=\"" << num(v.x(viol.where.x)) << "\" cy=\"" << num(v.y(viol.where.y)) << "\" r=\""
      << num(radius * 2) << "\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace opaque_swarm
