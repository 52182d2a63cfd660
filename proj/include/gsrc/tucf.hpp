#pragma once

#include "gsrc/channel.hpp"
#include "gsrc/episode.hpp"
#include "gsrc/kinematics.hpp"
#include "gsrc/rng.hpp"
#include "gsrc/velocity_grid.hpp"

namespace gsrc::tucf {

// Command whose one-slot displacement from the last known position lands
// nearest the next waypoint. Ties prefer the slower command, then the
// lexicographically smallest components.
Vec3 generate(const Vec3& last_known, const Vec3& next_target, double tti_s,
              const VelocitySets& sets);

// Baseline flight: one transmission per slot, a single-entry preemptive
// queue, and hover once an executed command runs out with no successor.
EpisodeResult run_episode(const TargetTrajectory& target, const SimClock& clock,
                          ChannelModel& channel, const VelocitySets& sets,
                          const Vec3& bs, Rng& rng);

}  // namespace gsrc::tucf
