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

// JSON-lines trace format. Line 1 is a header, then one line per event, then one
// {"violation": ...} line per recorded violation. Keys are emitted in sorted order
// and reals in shortest round-trip form.

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opaque_swarm/engine.hpp"

namespace opaque_swarm {

inline constexpr int kTraceVersion = 1;

inline nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }
inline Point json_point(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline nlohmann::json event_json(const TraceEvent& e) {
  nlohmann::json payload = nlohmann::json::object();
  switch (e.kind) {
    case EventKind::kLook:
      payload["visible"] = e.visible;
      payload["to"] = point_json(e.to);
      payload["color"] = e.color;
      break;
    case EventKind::kLight: payload["color"] = e.color; break;
    case EventKind::kMoveStart:
      payload["from"] = point_json(e.from);
      payload["to"] = point_json(e.to);
      payload["t_end"] = e.t_end;
      break;
    case EventKind::kMoveEnd: payload["position"] = point_json(e.to); break;
    case EventKind::kRoundBegin:
    case EventKind::kRoundEnd: payload["round"] = e.round; break;
  }
  nlohmann::json j;
  j["t"] = e.t;
  j["kind"] = std::string(to_string(e.kind));
  j["robot"] = e.robot ? nlohmann::json(*e.robot) : nlohmann::json(nullptr);
  j["payload"] = std::move(payload);
  return j;
}

inline TraceEvent json_event(const nlohmann::json& j) {
  TraceEvent e;
  e.t = j.at("t").get<double>();
  auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown event kind");
  e.kind = *kind;
  if (!j.at("robot").is_null()) e.robot = j.at("robot").get<std::size_t>();
  const auto& p = j.at("payload");
  switch (e.kind) {
    case EventKind::kLook:
      e.visible = p.at("visible").get<std::size_t>();
      e.to = json_point(p.at("to"));
      e.color = p.at("color").get<std::string>();
      break;
    case EventKind::kLight: e.color = p.at("color").get<std::string>(); break;
    case EventKind::kMoveStart:
      e.from = json_point(p.at("from"));
      e.to = json_point(p.at("to"));
      e.t_end = p.at("t_end").get<double>();
      break;
    case EventKind::kMoveEnd: e.to = json_point(p.at("position")); break;
    case EventKind::kRoundBegin:
    case EventKind::kRoundEnd: e.round = p.at("round").get<std::int64_t>(); break;
  }
  return e;
}

inline nlohmann::json violation_json(const Violation& v) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(v.kind));
  j["t"] = v.t;
  j["robots"] = v.robots;
  j["where"] = point_json(v.where);
  j["tau"] = v.tau ? nlohmann::json(*v.tau) : nlohmann::json(nullptr);
  j["details"] = v.details;
  return j;
}

inline Violation json_violation(const nlohmann::json& j) {
  Violation v;
  auto kind = parse_violation_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown violation kind");
  v.kind = *kind;
  v.t = j.at("t").get<double>();
  v.robots = j.at("robots").get<std::vector<std::size_t>>();
  v.where = json_point(j.at("where"));
  if (!j.at("tau").is_null()) v.tau = j.at("tau").get<std::size_t>();
  v.details = j.at("details").get<std::string>();
  return v;
}

inline nlohmann::json header_json(const Trace& trace) {
  nlohmann::json h;
  h["version"] = kTraceVersion;
  h["model"] = to_string(trace.model);
  h["seed"] = trace.seed;
  h["n"] = trace.size();
  h["algorithm"] = trace.algorithm;
  h["horizon"] = trace.horizon;
  h["transparent"] = trace.transparent;
  h["halted"] = trace.halted;
  nlohmann::json robots = nlohmann::json::array();
  for (const auto& r : trace.initial.robots)
    robots.push_back({{"x", r.position.x}, {"y", r.position.y}, {"light", r.light}});
  h["initial"] = std::move(robots);
  return h;
}

inline void write_trace(std::ostream& out, const Trace& trace) {
  out << header_json(trace).dump() << '\n';
  for (const auto& e : trace.events) out << event_json(e).dump() << '\n';
  for (const auto& v : trace.violations) out << nlohmann::json{{"violation", violation_json(v)}}.dump() << '\n';
}

inline std::string trace_to_string(const Trace& trace) {
  std::ostringstream ss;
  write_trace(ss, trace);
  return ss.str();
}

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The final configuration is rebuilt by replay.
inline Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (!header) {
        if (j.at("version").get<int>() != kTraceVersion) throw std::runtime_error("unsupported trace version");
        auto model = parse_model(j.at("model").get<std::string>());
        if (!model) throw std::runtime_error("bad model in trace header");
        trace.model = *model;
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.algorithm = j.at("algorithm").get<std::string>();
        trace.horizon = j.at("horizon").get<double>();
        trace.transparent = j.at("transparent").get<bool>();
        trace.halted = j.value("halted", false);
        for (const auto& r : j.at("initial"))
          trace.initial.robots.push_back({{r.at("x").get<double>(), r.at("y").get<double>()},
                                          r.at("light").get<std::string>()});
        if (trace.initial.size() != j.at("n").get<std::size_t>()) throw std::runtime_error("header n mismatch");
        header = true;
      } else if (j.contains("violation")) {
        trace.violations.push_back(json_violation(j.at("violation")));
      } else {
        trace.events.push_back(json_event(j));
      }
    } catch (const std::exception& e) {
      throw TraceParseError(lineno, e.what());
    }
  }
  if (!header) throw TraceParseError(lineno, "missing header");
  trace.final = configuration_at(trace, trace.horizon);
  return trace;
}

inline Trace trace_from_string(const std::string& s) {
  std::istringstream ss(s);
  return read_trace(ss);
}

}  // namespace opaque_swarm
