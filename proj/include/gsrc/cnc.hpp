#pragma once

#include <optional>

#include "gsrc/vec3.hpp"

namespace gsrc {

// One command-and-control message: the velocity the UAV should fly during
// generation slot `tti`, stamped with its generation and delivery times.
struct CncRecord {
  int tti = 0;           // 1-based generation slot index
  Vec3 velocity;         // commanded velocity payload
  double gen_time = 0.0; // slot start at the base station
  std::optional<double> arrival_time;  // earliest decoded delivery, if any
};

}  // namespace gsrc
