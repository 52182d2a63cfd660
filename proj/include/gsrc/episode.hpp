#pragma once

#include <optional>
#include <vector>

#include "gsrc/kinematics.hpp"

namespace gsrc {

// Outcome of one simulated flight over the TTI horizon.
struct EpisodeResult {
  MotionLog motion;
  std::vector<TrackSample> samples;
  double mse = 0.0;
  long total_transmissions = 0;
  long decode_count = 0;
  std::vector<std::optional<double>> latency_s;  // per slot, arrival - generation
};

// Samples the finished motion log and packs the result.
EpisodeResult finish_episode(MotionLog motion, const TargetTrajectory& target,
                             const SimClock& clock, long total_transmissions,
                             long decode_count,
                             std::vector<std::optional<double>> latency_s);

}  // namespace gsrc
