#include "gsrc/repetition.hpp"

#include <stdexcept>

namespace gsrc::repetition {

void RepetitionParams::validate(const SimClock& clock) const {
  if (k_max < 1) {
    throw std::invalid_argument("repetition.k_max must be >= 1");
  }
  if (!(t_rep_s > 0.0)) {
    throw std::invalid_argument("repetition.t_rep_s must be positive");
  }
  if (!((k_max - 1) * t_rep_s < clock.tti_s)) {
    throw std::invalid_argument(
        "repetition: (k_max - 1) * t_rep_s must be below one slot");
  }
}

RepetitionOutcome run_proactive(const CncRecord& cnc, const SimClock& clock,
                                TransmissionContext& ctx, ChannelModel& channel,
                                const RepetitionParams& params, const Vec3& bs,
                                Rng& rng) {
  params.validate(clock);
  const double t0 = cnc.gen_time;
  // Canonical grid boundary; t0 + tti_s can drift a bit from i * tti_s.
  const double t1 = clock.tti_start(cnc.tti + 1);

  RepetitionOutcome out;
  for (int k = 1; k <= params.k_max; ++k) {
    const double t_k = t0 + (k - 1) * params.t_rep_s;
    // A copy known to be in by this send instant makes the send redundant.
    if (out.earliest_arrival && *out.earliest_arrival <= t_k) {
      out.terminated_early = true;
      break;
    }
    ctx.advance_to(t_k);
    const ChannelDraw draw = channel.sample(bs, ctx.current_position(), rng);
    out.attempts += 1;
    out.draws.push_back({t_k, draw});
    if (draw.decoded) {
      const double arrival = t_k + draw.tx_time_s;
      if (!out.earliest_arrival || arrival < *out.earliest_arrival) {
        out.earliest_arrival = arrival;
        ctx.deliver_at(cnc, arrival);
      }
    }
    const double t_end = (k == params.k_max) ? t1 : t0 + k * params.t_rep_s;
    ctx.advance_to(t_end);
  }
  ctx.advance_to(t1);
  return out;
}

}  // namespace gsrc::repetition
