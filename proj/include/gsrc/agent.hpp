#pragma once

#include <functional>

#include "gsrc/vec3.hpp"

namespace gsrc {

// What the base station knows when generating a slot's command: the
// uplinked position at the slot boundary and the boundary time itself.
struct AgentState {
  Vec3 position;
  double t = 0.0;
};

// Command generator: maps the slot-start state and 1-based slot index to a
// commanded velocity. Must be pure; batches may call it from worker threads.
using Policy = std::function<Vec3(const AgentState&, int tti)>;

}  // namespace gsrc
