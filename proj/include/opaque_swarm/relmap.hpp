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

// Witness facts, solvability closure over the model lattice and the pairwise
// relation map between the twelve opaque models.

#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opaque_swarm/model.hpp"

namespace opaque_swarm {

class RelmapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kModelCount = 12;

/// Witness problems in display order.
inline const std::vector<std::string>& witness_problems() {
  static const std::vector<std::string> names{"trt", "fff", "nwc", "spi", "ash", "pse"};
  return names;
}

inline std::size_t model_index(const ModelId& m) {
  return static_cast<std::size_t>(m.sync) * kLightClasses.size() + static_cast<std::size_t>(m.light);
}

inline bool light_leq(LightClass a, LightClass b) {
  if (a == b || a == LightClass::kOblot || b == LightClass::kLumi) return true;
  return false;
}

inline bool structural_leq(const ModelId& a, const ModelId& b) {
  return light_leq(a.light, b.light) && static_cast<int>(a.sync) <= static_cast<int>(b.sync);
}

inline bool comparable(const ModelId& a, const ModelId& b) { return structural_leq(a, b) || structural_leq(b, a); }

// ---------------------------------------------------------------------------
// Facts

struct WitnessFact {
  std::string problem;
  ModelId model;
  bool solvable = true;
  std::string source;
};

inline std::string describe(const WitnessFact& f) {
  return f.problem + (f.solvable ? " in " : " not in ") + to_string(f.model) + " (" + f.source + ")";
}

inline std::vector<WitnessFact> facts_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw RelmapError("facts must be a JSON list");
  std::vector<WitnessFact> out;
  for (const auto& e : j) {
    auto model = parse_model(e.at("model").get<std::string>());
    if (!model) throw RelmapError("bad model in fact: " + e.at("model").get<std::string>());
    out.push_back({lower(e.at("problem").get<std::string>()), *model, e.at("solvable").get<bool>(),
                   e.value("source", std::string())});
  }
  return out;
}

inline nlohmann::json facts_to_json(const std::vector<WitnessFact>& facts) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : facts)
    j.push_back({{"problem", f.problem}, {"model", to_string(f.model)}, {"solvable", f.solvable}, {"source", f.source}});
  return j;
}

inline std::vector<WitnessFact> load_facts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RelmapError("cannot open facts file " + path);
  try {
    return facts_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw RelmapError("malformed facts file " + path + ": " + e.what());
  }
}

inline const char* kDefaultFactsJson = R"([
  {"problem": "trt", "model": "OBLOT^F", "solvable": false, "source": "trt:impossible"},
  {"problem": "trt", "model": "FSTA^A", "solvable": true, "source": "trt:algorithm"},
  {"problem": "trt", "model": "FCOM^A", "solvable": true, "source": "trt:algorithm"},
  {"problem": "fff", "model": "FSTA^A", "solvable": true, "source": "fff:algorithm"},
  {"problem": "fff", "model": "FCOM^F", "solvable": true, "source": "fff:algorithm"},
  {"problem": "fff", "model": "OBLOT^F", "solvable": false, "source": "fff:impossible"},
  {"problem": "fff", "model": "FCOM^S", "solvable": false, "source": "fff:impossible"},
  {"problem": "nwc", "model": "FSTA^F", "solvable": false, "source": "nwc:impossible"},
  {"problem": "nwc", "model": "FCOM^A", "solvable": true, "source": "nwc:algorithm"},
  {"problem": "spi", "model": "OBLOT^F", "solvable": true, "source": "spi:algorithm"},
  {"problem": "spi", "model": "LUMI^A", "solvable": true, "source": "spi:algorithm"},
  {"problem": "spi", "model": "FSTA^S", "solvable": false, "source": "spi:impossible"},
  {"problem": "spi", "model": "FCOM^S", "solvable": false, "source": "spi:impossible"},
  {"problem": "ash", "model": "OBLOT^F", "solvable": true, "source": "ash:in-notin"},
  {"problem": "ash", "model": "LUMI^S", "solvable": false, "source": "ash:in-notin"},
  {"problem": "pse", "model": "FSTA^A", "solvable": false, "source": "pse:impossible"},
  {"problem": "pse", "model": "OBLOT^S", "solvable": true, "source": "pse:algorithm"},
  {"problem": "pse", "model": "FCOM^A", "solvable": true, "source": "pse:algorithm"}
])";

inline std::vector<WitnessFact> default_facts() { return facts_from_json(nlohmann::json::parse(kDefaultFactsJson)); }

// ---------------------------------------------------------------------------
// Closure

enum class Solvability { kUnknown, kSolvable, kUnsolvable };

inline std::string_view to_string(Solvability s) {
  switch (s) {
    case Solvability::kSolvable: return "solvable";
    case Solvability::kUnsolvable: return "unsolvable";
    case Solvability::kUnknown: return "unknown";
  }
  return "?";
}

struct SolvabilityMatrix {
  /// Problems in first-seen order.
  std::vector<std::string> problems;
  std::map<std::string, std::array<Solvability, kModelCount>> cells;

  Solvability at(const std::string& problem, const ModelId& m) const {
    auto it = cells.find(problem);
    return it == cells.end() ? Solvability::kUnknown : it->second[model_index(m)];
  }
  bool solvable(const std::string& p, const ModelId& m) const { return at(p, m) == Solvability::kSolvable; }
  bool unsolvable(const std::string& p, const ModelId& m) const { return at(p, m) == Solvability::kUnsolvable; }

  std::size_t count(const std::string& problem, Solvability s) const {
    auto it = cells.find(problem);
    if (it == cells.end()) return s == Solvability::kUnknown ? kModelCount : 0;
    return static_cast<std::size_t>(std::count(it->second.begin(), it->second.end(), s));
  }
  std::size_t unknown_count() const {
    std::size_t n = 0;
    for (const auto& p : problems) n += count(p, Solvability::kUnknown);
    return n;
  }
};

/// Propagates solvability upward and unsolvability downward along the
/// structural order. Throws RelmapError naming both facts on a contradiction.
inline SolvabilityMatrix close(const std::vector<WitnessFact>& facts) {
  SolvabilityMatrix out;
  std::map<std::string, std::array<std::optional<std::size_t>, kModelCount>> origin;
  const auto models = all_models();
  for (std::size_t k = 0; k < facts.size(); ++k) {
    const auto& f = facts[k];
    if (!out.cells.count(f.problem)) {
      out.problems.push_back(f.problem);
      out.cells[f.problem].fill(Solvability::kUnknown);
    }
    auto& row = out.cells[f.problem];
    auto& src = origin[f.problem];
    const auto value = f.solvable ? Solvability::kSolvable : Solvability::kUnsolvable;
    for (const auto& m : models) {
      bool reached = f.solvable ? structural_leq(f.model, m) : structural_leq(m, f.model);
      if (!reached) continue;
      auto i = model_index(m);
      if (row[i] != Solvability::kUnknown && row[i] != value)
        throw RelmapError("contradictory facts at " + f.problem + "/" + to_string(m) + ": " +
                          describe(facts[*src[i]]) + " vs " + describe(f));
      if (row[i] == Solvability::kUnknown) {
        row[i] = value;
        src[i] = k;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relations

enum class Relation { kGreater, kLess, kOrthogonal, kEquivalent };

inline constexpr std::array<Relation, 4> kRelations = {Relation::kGreater, Relation::kLess, Relation::kOrthogonal,
                                                      Relation::kEquivalent};

inline std::string_view symbol(Relation r) {
  switch (r) {
    case Relation::kGreater: return ">";
    case Relation::kLess: return "<";
    case Relation::kOrthogonal: return "⊥";
    case Relation::kEquivalent: return "≡";
  }
  return "?";
}

inline std::string_view ascii_symbol(Relation r) {
  switch (r) {
    case Relation::kGreater: return ">";
    case Relation::kLess: return "<";
    case Relation::kOrthogonal: return "perp";
    case Relation::kEquivalent: return "equiv";
  }
  return "?";
}

inline Relation mirror(Relation r) {
  if (r == Relation::kGreater) return Relation::kLess;
  if (r == Relation::kLess) return Relation::kGreater;
  return r;
}

/// A proven separation: `problem` is solvable under `solver` and not under `other`.
struct Separation {
  ModelId solver;
  ModelId other;
  std::string problem;
  int theorem = 0;
};

/// The separations stated by the taxonomy theorems, in statement order.
inline const std::vector<Separation>& theorem_separations() {
  static const std::vector<Separation> seps = [] {
    using L = LightClass;
    using Y = SyncMode;
    std::vector<Separation> s;
    auto add = [&](int th, L a, Y ya, L b, Y yb, const char* p) { s.push_back({{a, ya}, {b, yb}, p, th}); };
    auto weaker_or_equal = [](Y y) {
      std::vector<Y> out;
      for (auto z : kSyncModes)
        if (static_cast<int>(z) <= static_cast<int>(y)) out.push_back(z);
      std::reverse(out.begin(), out.end());
      return out;
    };
    const std::array<Y, 3> top_down{Y::kFsync, Y::kSsync, Y::kAsync};
    const std::array<Y, 2> weak{Y::kSsync, Y::kAsync};
    // Internal or external lights beat no lights.
    for (auto x : {L::kFsta, L::kFcom, L::kLumi})
      for (auto y : top_down)
        for (auto z : weaker_or_equal(y)) add(1, x, y, L::kOblot, z, "trt");
    // Full lights and fully synchronous external lights beat external lights.
    add(2, L::kLumi, Y::kAsync, L::kFcom, Y::kAsync, "fff");
    for (auto y : {Y::kSsync, Y::kFsync})
      for (auto z : weak) add(2, L::kLumi, y, L::kFcom, z, "fff");
    for (auto z : weak) add(2, L::kFcom, Y::kFsync, L::kFcom, z, "fff");
    // Full lights beat internal lights.
    for (auto y : top_down)
      for (auto z : weaker_or_equal(y)) add(3, L::kLumi, y, L::kFsta, z, "nwc");
    // Internal and external lights are orthogonal below FSYNC.
    for (auto y : top_down)
      for (auto z : weak) {
        add(4, L::kFsta, y, L::kFcom, z, "fff");
        add(4, L::kFcom, z, L::kFsta, y, "nwc");
      }
    // FSYNC beats the weaker modes without full lights.
    for (auto x : {L::kOblot, L::kFsta, L::kFcom})
      for (auto z : weak) add(5, x, Y::kFsync, x, z, "spi");
    for (auto z : weak) {
      add(5, L::kOblot, Y::kFsync, L::kFcom, z, "spi");
      add(5, L::kFcom, z, L::kOblot, Y::kFsync, "nwc");
    }
    for (auto z : weak) {
      add(5, L::kOblot, Y::kFsync, L::kFsta, z, "spi");
      add(5, L::kFsta, z, L::kOblot, Y::kFsync, "trt");
    }
    // FSYNC full lights beat weaker full lights.
    for (auto z : weak) add(6, L::kLumi, Y::kFsync, L::kLumi, z, "ash");
    for (auto z : weak) {
      add(6, L::kOblot, Y::kFsync, L::kLumi, z, "ash");
      add(6, L::kLumi, z, L::kOblot, Y::kFsync, "trt");
    }
    for (auto z : weak) {
      add(6, L::kFsta, Y::kFsync, L::kLumi, z, "ash");
      add(6, L::kLumi, z, L::kFsta, Y::kFsync, "nwc");
    }
    // SSYNC beats ASYNC without external lights.
    add(7, L::kOblot, Y::kSsync, L::kOblot, Y::kAsync, "pse");
    add(7, L::kFsta, Y::kSsync, L::kFsta, Y::kAsync, "pse");
    add(7, L::kOblot, Y::kSsync, L::kFsta, Y::kAsync, "pse");
    add(7, L::kFsta, Y::kAsync, L::kOblot, Y::kSsync, "trt");
    return s;
  }();
  return seps;
}

/// Chooses the tag of a problem solvable under `m1` and not under `m2`. A stated
/// separation (s, o, P) applies when s ≤ m1 and m2 ≤ o; exact statements win,
/// then statements about m1 itself, then matching light classes, then statement
/// order. Without an applicable statement the first separating problem is used.
inline std::optional<std::string> pick_witness(const ModelId& m1, const ModelId& m2, const SolvabilityMatrix& mx) {
  std::vector<std::string> candidates;
  for (const auto& p : mx.problems)
    if (mx.solvable(p, m1) && mx.unsolvable(p, m2)) candidates.push_back(p);
  if (candidates.empty()) return std::nullopt;
  const Separation* best = nullptr;
  std::array<int, 5> best_key{};
  for (const auto& s : theorem_separations()) {
    if (std::find(candidates.begin(), candidates.end(), s.problem) == candidates.end()) continue;
    if (!structural_leq(s.solver, m1) || !structural_leq(m2, s.other)) continue;
    std::array<int, 5> key{!(s.solver == m1 && s.other == m2), !(s.solver == m1), s.solver.light != m1.light,
                           s.other.light != m2.light, s.theorem};
    if (!best || key < best_key) {
      best = &s;
      best_key = key;
    }
  }
  if (best) return best->problem;
  for (const auto& p : witness_problems())
    if (std::find(candidates.begin(), candidates.end(), p) != candidates.end()) return p;
  return candidates.front();
}

struct RelationCell {
  ModelId m1;
  ModelId m2;
  /// Subset of kRelations, read as "m1 REL m2".
  std::vector<Relation> candidates;
  /// Problem solvable under m1 and not under m2.
  std::optional<std::string> up;
  /// Problem solvable under m2 and not under m1.
  std::optional<std::string> down;
  std::optional<Relation> transparent;

  bool proven() const { return candidates.size() == 1; }
  std::vector<std::string> witnesses() const {
    std::vector<std::string> w;
    if (up) w.push_back(*up);
    if (down) w.push_back(*down);
    return w;
  }
};

inline RelationCell relation_candidates(const ModelId& m1, const ModelId& m2, const SolvabilityMatrix& mx) {
  if (m1 == m2) throw RelmapError("relation of a model with itself");
  RelationCell c{m1, m2, {}, pick_witness(m1, m2, mx), pick_witness(m2, m1, mx), std::nullopt};
  std::array<bool, 4> keep{true, true, true, true};
  auto drop = [&](Relation r) { keep[static_cast<std::size_t>(r)] = false; };
  if (structural_leq(m2, m1)) {
    drop(Relation::kLess);
    drop(Relation::kOrthogonal);
  }
  if (structural_leq(m1, m2)) {
    drop(Relation::kGreater);
    drop(Relation::kOrthogonal);
  }
  if (c.up) {
    drop(Relation::kEquivalent);
    drop(Relation::kLess);
  }
  if (c.down) {
    drop(Relation::kEquivalent);
    drop(Relation::kGreater);
  }
  for (auto r : kRelations)
    if (keep[static_cast<std::size_t>(r)]) c.candidates.push_back(r);
  if (c.candidates.empty())
    throw RelmapError("no consistent relation between " + to_string(m1) + " and " + to_string(m2));
  return c;
}

// ---------------------------------------------------------------------------
// Table layout and reference data

/// Row models of the triangular table; row i pairs with every model after it.
inline std::vector<ModelId> table_rows() {
  auto m = all_models();
  m.pop_back();
  return m;
}

/// Column models, strongest first.
inline std::vector<ModelId> table_columns() {
  auto m = all_models();
  std::reverse(m.begin(), m.end());
  m.pop_back();
  return m;
}

struct TransparentNote {
  ModelId m1;
  ModelId m2;
  Relation relation;
};

/// Relations known in the transparent framework for the open opaque pairs.
inline const std::vector<TransparentNote>& transparent_notes() {
  using L = LightClass;
  using Y = SyncMode;
  static const std::vector<TransparentNote> notes{
      {{L::kFsta, Y::kAsync}, {L::kFcom, Y::kFsync}, Relation::kLess},
      {{L::kFcom, Y::kAsync}, {L::kFcom, Y::kSsync}, Relation::kLess},
      {{L::kFcom, Y::kAsync}, {L::kOblot, Y::kSsync}, Relation::kOrthogonal},
      {{L::kLumi, Y::kAsync}, {L::kFcom, Y::kFsync}, Relation::kLess},
      {{L::kLumi, Y::kAsync}, {L::kLumi, Y::kSsync}, Relation::kEquivalent},
      {{L::kLumi, Y::kAsync}, {L::kFcom, Y::kSsync}, Relation::kGreater},
      {{L::kLumi, Y::kAsync}, {L::kFsta, Y::kSsync}, Relation::kGreater},
      {{L::kLumi, Y::kAsync}, {L::kOblot, Y::kSsync}, Relation::kGreater},
      {{L::kFsta, Y::kSsync}, {L::kFcom, Y::kFsync}, Relation::kLess},
      {{L::kLumi, Y::kSsync}, {L::kFcom, Y::kFsync}, Relation::kLess},
      {{L::kFsta, Y::kFsync}, {L::kFcom, Y::kFsync}, Relation::kLess},
      {{L::kFcom, Y::kFsync}, {L::kLumi, Y::kFsync}, Relation::kEquivalent},
  };
  return notes;
}

/// Opaque X^Y is strictly weaker than transparent X^Y for every light class and mode.
inline constexpr std::string_view kTransparentDominance = "opaque X^Y < transparent X^Y (witness: ls)";

inline std::optional<Relation> transparent_note(const ModelId& m1, const ModelId& m2) {
  for (const auto& n : transparent_notes()) {
    if (n.m1 == m1 && n.m2 == m2) return n.relation;
    if (n.m1 == m2 && n.m2 == m1) return mirror(n.relation);
  }
  return std::nullopt;
}

struct RelationTable {
  std::vector<RelationCell> cells;

  const RelationCell* find(const ModelId& a, const ModelId& b) const {
    for (const auto& c : cells)
      if ((c.m1 == a && c.m2 == b) || (c.m1 == b && c.m2 == a)) return &c;
    return nullptr;
  }
};

/// All 66 cells in row-major table order, oriented row versus column.
inline RelationTable relation_table(const SolvabilityMatrix& mx) {
  RelationTable t;
  const auto models = all_models();
  for (std::size_t i = 0; i < models.size(); ++i)
    for (std::size_t j = models.size(); j-- > i + 1;) {
      auto c = relation_candidates(models[i], models[j], mx);
      if (!c.proven()) c.transparent = transparent_note(c.m1, c.m2);
      t.cells.push_back(std::move(c));
    }
  return t;
}

struct ExpectedCell {
  std::string row;
  std::string column;
  /// Candidate symbols joined by " or ".
  std::string relation;
  /// Witness tags, unordered.
  std::vector<std::string> witnesses;
  /// Transparent relation symbol for open cells, empty otherwise.
  std::string transparent;
};

/// Reference relation map, row versus column.
inline const std::vector<ExpectedCell>& expected_table() {
  static const std::vector<ExpectedCell> cells{
      {"OBLOT^A", "LUMI^F", "<", {"trt"}, ""},
      {"OBLOT^A", "FCOM^F", "<", {"trt"}, ""},
      {"OBLOT^A", "FSTA^F", "<", {"trt"}, ""},
      {"OBLOT^A", "OBLOT^F", "<", {"spi"}, ""},
      {"OBLOT^A", "LUMI^S", "<", {"trt"}, ""},
      {"OBLOT^A", "FCOM^S", "<", {"trt"}, ""},
      {"OBLOT^A", "FSTA^S", "<", {"trt"}, ""},
      {"OBLOT^A", "OBLOT^S", "<", {"pse"}, ""},
      {"OBLOT^A", "LUMI^A", "<", {"trt"}, ""},
      {"OBLOT^A", "FCOM^A", "<", {"trt"}, ""},
      {"OBLOT^A", "FSTA^A", "<", {"trt"}, ""},

      {"FSTA^A", "LUMI^F", "<", {"nwc"}, ""},
      {"FSTA^A", "FCOM^F", "< or ⊥", {"nwc"}, "<"},
      {"FSTA^A", "FSTA^F", "<", {"spi"}, ""},
      {"FSTA^A", "OBLOT^F", "⊥", {"trt", "spi"}, ""},
      {"FSTA^A", "LUMI^S", "<", {"nwc"}, ""},
      {"FSTA^A", "FCOM^S", "⊥", {"nwc", "fff"}, ""},
      {"FSTA^A", "FSTA^S", "<", {"pse"}, ""},
      {"FSTA^A", "OBLOT^S", "⊥", {"pse", "trt"}, ""},
      {"FSTA^A", "LUMI^A", "<", {"nwc"}, ""},
      {"FSTA^A", "FCOM^A", "⊥", {"nwc", "fff"}, ""},

      {"FCOM^A", "LUMI^F", "<", {"fff"}, ""},
      {"FCOM^A", "FCOM^F", "<", {"fff"}, ""},
      {"FCOM^A", "FSTA^F", "⊥", {"fff", "nwc"}, ""},
      {"FCOM^A", "OBLOT^F", "⊥", {"nwc", "spi"}, ""},
      {"FCOM^A", "LUMI^S", "<", {"fff"}, ""},
      {"FCOM^A", "FCOM^S", "< or ≡", {}, "<"},
      {"FCOM^A", "FSTA^S", "⊥", {"fff", "nwc"}, ""},
      {"FCOM^A", "OBLOT^S", "> or ⊥", {"nwc"}, "⊥"},
      {"FCOM^A", "LUMI^A", "<", {"fff"}, ""},

      {"LUMI^A", "LUMI^F", "<", {"ash"}, ""},
      {"LUMI^A", "FCOM^F", "< or ⊥", {"ash"}, "<"},
      {"LUMI^A", "FSTA^F", "⊥", {"ash", "nwc"}, ""},
      {"LUMI^A", "OBLOT^F", "⊥", {"ash", "trt"}, ""},
      {"LUMI^A", "LUMI^S", "< or ≡", {}, "≡"},
      {"LUMI^A", "FCOM^S", "> or ⊥", {"fff"}, ">"},
      {"LUMI^A", "FSTA^S", "> or ⊥", {"nwc"}, ">"},
      {"LUMI^A", "OBLOT^S", "> or ⊥", {"trt"}, ">"},

      {"OBLOT^S", "LUMI^F", "<", {"trt"}, ""},
      {"OBLOT^S", "FCOM^F", "<", {"trt"}, ""},
      {"OBLOT^S", "FSTA^F", "<", {"trt"}, ""},
      {"OBLOT^S", "OBLOT^F", "<", {"spi"}, ""},
      {"OBLOT^S", "LUMI^S", "<", {"trt"}, ""},
      {"OBLOT^S", "FCOM^S", "<", {"trt"}, ""},
      {"OBLOT^S", "FSTA^S", "<", {"trt"}, ""},

      {"FSTA^S", "LUMI^F", "<", {"nwc"}, ""},
      {"FSTA^S", "FCOM^F", "< or ⊥", {"nwc"}, "<"},
      {"FSTA^S", "FSTA^F", "<", {"spi"}, ""},
      {"FSTA^S", "OBLOT^F", "⊥", {"trt", "spi"}, ""},
      {"FSTA^S", "LUMI^S", "<", {"nwc"}, ""},
      {"FSTA^S", "FCOM^S", "⊥", {"nwc", "fff"}, ""},

      {"FCOM^S", "LUMI^F", "<", {"fff"}, ""},
      {"FCOM^S", "FCOM^F", "<", {"fff"}, ""},
      {"FCOM^S", "FSTA^F", "⊥", {"fff", "nwc"}, ""},
      {"FCOM^S", "OBLOT^F", "⊥", {"spi", "nwc"}, ""},
      {"FCOM^S", "LUMI^S", "<", {"fff"}, ""},

      {"LUMI^S", "LUMI^F", "<", {"ash"}, ""},
      {"LUMI^S", "FCOM^F", "< or ⊥", {"ash"}, "<"},
      {"LUMI^S", "FSTA^F", "⊥", {"ash", "nwc"}, ""},
      {"LUMI^S", "OBLOT^F", "⊥", {"ash", "trt"}, ""},

      {"OBLOT^F", "LUMI^F", "<", {"trt"}, ""},
      {"OBLOT^F", "FCOM^F", "<", {"trt"}, ""},
      {"OBLOT^F", "FSTA^F", "<", {"trt"}, ""},

      {"FSTA^F", "LUMI^F", "<", {"nwc"}, ""},
      {"FSTA^F", "FCOM^F", "< or ⊥", {"nwc"}, "<"},

      {"FCOM^F", "LUMI^F", "< or ≡", {}, "≡"},
  };
  return cells;
}

inline std::string candidate_text(const RelationCell& c) {
  std::string s;
  for (std::size_t i = 0; i < c.candidates.size(); ++i) {
    if (i) s += " or ";
    s += symbol(c.candidates[i]);
  }
  return s;
}

/// Compares a derived table against the reference map. Returns one message per mismatch.
inline std::vector<std::string> check(const RelationTable& table) {
  std::vector<std::string> errors;
  const auto& expected = expected_table();
  if (table.cells.size() != expected.size())
    errors.push_back("cell count " + std::to_string(table.cells.size()) + " != " + std::to_string(expected.size()));
  for (const auto& e : expected) {
    auto r = parse_model(e.row);
    auto col = parse_model(e.column);
    const RelationCell* cell = (r && col) ? table.find(*r, *col) : nullptr;
    std::string where = e.row + " vs " + e.column;
    if (!cell) {
      errors.push_back(where + ": missing");
      continue;
    }
    RelationCell c = *cell;
    if (!(c.m1 == *r)) {
      std::swap(c.m1, c.m2);
      std::swap(c.up, c.down);
      for (auto& x : c.candidates) x = mirror(x);
      std::sort(c.candidates.begin(), c.candidates.end());
      if (c.transparent) c.transparent = mirror(*c.transparent);
    }
    if (candidate_text(c) != e.relation) errors.push_back(where + ": relation " + candidate_text(c) + " != " + e.relation);
    auto got = c.witnesses();
    auto want = e.witnesses;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
      std::string g, w;
      for (const auto& x : got) g += x + " ";
      for (const auto& x : want) w += x + " ";
      errors.push_back(where + ": witnesses [" + g + "] != [" + w + "]");
    }
    std::string red = c.transparent ? std::string(symbol(*c.transparent)) : std::string();
    if (red != e.transparent) errors.push_back(where + ": transparent note '" + red + "' != '" + e.transparent + "'");
  }
  return errors;
}

// ---------------------------------------------------------------------------
// Emitters

inline std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char ch : s)
    if ((ch & 0xC0) != 0x80) ++n;
  return n;
}

inline std::string cell_text(const RelationCell& c) {
  std::string s = candidate_text(c);
  if (c.transparent) s += " [" + std::string(symbol(*c.transparent)) + "]";
  std::string w;
  for (const auto& x : c.witnesses()) w += (w.empty() ? "" : ",") + x;
  if (!w.empty()) s += " " + w;
  return s;
}

/// Triangular aligned-text table; gray cells carry the transparent relation in brackets.
inline std::string format_text(const RelationTable& table) {
  const auto rows = table_rows();
  const auto cols = table_columns();
  std::vector<std::vector<std::string>> grid(rows.size() + 1, std::vector<std::string>(cols.size() + 1));
  grid[0][0] = "";
  for (std::size_t j = 0; j < cols.size(); ++j) grid[0][j + 1] = to_string(cols[j]);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    grid[i + 1][0] = to_string(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (model_index(cols[j]) <= model_index(rows[i])) continue;
      const auto* c = table.find(rows[i], cols[j]);
      if (c) grid[i + 1][j + 1] = cell_text(*c);
    }
  }
  std::vector<std::size_t> width(cols.size() + 1, 0);
  for (const auto& row : grid)
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], display_width(row[j]));
  std::ostringstream out;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      line += row[j];
      if (j + 1 < row.size()) line += std::string(width[j] - display_width(row[j]) + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

/// One line per cell: row,column,candidates,witnesses,transparent.
inline std::string format_csv(const RelationTable& table) {
  std::ostringstream out;
  out << "row,column,relation,witnesses,transparent\n";
  for (const auto& c : table.cells) {
    std::string rel;
    for (std::size_t i = 0; i < c.candidates.size(); ++i) rel += (i ? "|" : "") + std::string(ascii_symbol(c.candidates[i]));
    std::string w;
    for (const auto& x : c.witnesses()) w += (w.empty() ? "" : "|") + x;
    out << to_string(c.m1) << ',' << to_string(c.m2) << ',' << rel << ',' << w << ','
        << (c.transparent ? std::string(ascii_symbol(*c.transparent)) : std::string()) << '\n';
  }
  return out.str();
}

inline std::string format_matrix(const SolvabilityMatrix& mx) {
  std::ostringstream out;
  const auto models = all_models();
  out << "problem";
  for (const auto& m : models) out << ' ' << to_string(m);
  out << '\n';
  for (const auto& p : mx.problems) {
    out << p;
    for (const auto& m : models) {
      auto s = mx.at(p, m);
      out << ' ' << (s == Solvability::kSolvable ? "+" : s == Solvability::kUnsolvable ? "-" : "?");
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace opaque_swarm
