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

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "opaque_swarm/engine.hpp"
#include "opaque_swarm/sched.hpp"

namespace opaque_swarm {

class AdversaryInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Round in which `robot` starts its first non-null move, if any.
inline std::optional<std::size_t> first_move_round(const Trace& trace, std::size_t robot) {
  for (const auto& e : trace.events)
    if (e.kind == EventKind::kMoveStart && e.robot == robot && e.from != e.to)
      return static_cast<std::size_t>(std::floor(e.t));
  return std::nullopt;
}

struct AdversarySchedule {
  Schedule schedule;
  /// Round in which the target is activated alone for the first of two times.
  std::size_t trigger_round = 0;
};

/// Replays `base` until `target` first moves, activates only `target` in that round
/// and the next, then continues with `tail`. Works for FSYNC and SSYNC bases; the
/// result is always an SSYNC schedule.
inline AdversarySchedule double_activation_adversary(const Algorithm& algorithm, LightClass light,
                                                     const Configuration& initial, const Schedule& base,
                                                     std::size_t target, const std::vector<ActivationSet>& tail,
                                                     std::uint64_t seed = 0, const Tolerance& tol = {}) {
  if (base.is_async()) throw ScheduleError("double activation needs a round schedule");
  if (target >= initial.size()) throw ScheduleError("target out of range");
  RunOptions opts;
  opts.tol = tol;
  auto trace = run({light, base.mode}, algorithm, initial, base, static_cast<double>(base.rounds.size()), false,
                   seed, opts);
  auto t = first_move_round(trace, target);
  if (!t) throw AdversaryInconclusive("target never moves within the base horizon");
  return {splice_double_activation(base, *t, target, tail), *t};
}

}  // namespace opaque_swarm
