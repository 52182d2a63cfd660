#pragma once

#include <optional>
#include <vector>

#include "gsrc/channel.hpp"
#include "gsrc/cnc.hpp"
#include "gsrc/kinematics.hpp"
#include "gsrc/rng.hpp"

namespace gsrc::repetition {

struct RepetitionParams {
  int k_max = 2;          // sends per slot, at most
  double t_rep_s = 5e-5;  // spacing between repetition sends

  void validate(const SimClock& clock) const;  // all sends must fit one slot
};

// What the proactive loop needs from the surrounding episode: motion and
// queue playback, plus delivery scheduling for this slot's command.
class TransmissionContext {
 public:
  virtual ~TransmissionContext() = default;

  // Plays motion and delivery events strictly before t, then moves time to t.
  virtual void advance_to(double t) = 0;

  virtual Vec3 current_position() const = 0;

  // Creates or tightens (to an earlier time) the pending delivery of this
  // slot's command; called once per decoded copy that improves the arrival.
  virtual void deliver_at(const CncRecord& cnc, double arrival_time) = 0;
};

struct AttemptRecord {
  double send_time;
  ChannelDraw draw;
};

struct RepetitionOutcome {
  int attempts = 0;
  bool terminated_early = false;               // a send was suppressed
  std::optional<double> earliest_arrival;      // min over decoded copies
  std::vector<AttemptRecord> draws;
};

// Proactive repetition of one slot's command: copies go out at t_rep
// spacing until one is known to have arrived; queue playback windows are
// interleaved between sends and the context ends the slot at its boundary.
RepetitionOutcome run_proactive(const CncRecord& cnc, const SimClock& clock,
                                TransmissionContext& ctx, ChannelModel& channel,
                                const RepetitionParams& params, const Vec3& bs,
                                Rng& rng);

}  // namespace gsrc::repetition
