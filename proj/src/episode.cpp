#include "gsrc/episode.hpp"

namespace gsrc {

EpisodeResult finish_episode(MotionLog motion, const TargetTrajectory& target,
                             const SimClock& clock, long total_transmissions,
                             long decode_count,
                             std::vector<std::optional<double>> latency_s) {
  EpisodeResult result{std::move(motion), {}, 0.0, total_transmissions,
                       decode_count, std::move(latency_s)};
  result.samples = track_samples(result.motion, target, clock);
  double sum = 0.0;
  for (const TrackSample& s : result.samples) sum += s.err * s.err;
  result.mse = sum / static_cast<double>(result.samples.size());
  return result;
}

}  // namespace gsrc
