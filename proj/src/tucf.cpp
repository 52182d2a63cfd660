#include "gsrc/tucf.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "gsrc/cnc.hpp"

namespace gsrc::tucf {

Vec3 generate(const Vec3& last_known, const Vec3& next_target, double tti_s,
              const VelocitySets& sets) {
  sets.validate();
  Vec3 best;
  auto best_key = std::make_tuple(std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity(),
                                  0.0, 0.0, 0.0);
  bool first = true;
  for (double vx : sets.x) {
    for (double vy : sets.y) {
      for (double vz : sets.z) {
        const Vec3 v{vx, vy, vz};
        const auto key = std::make_tuple(
            (last_known + v * tti_s - next_target).squared_norm(),
            v.squared_norm(), vx, vy, vz);
        if (first || key < best_key) {
          best = v;
          best_key = key;
          first = false;
        }
      }
    }
  }
  return best;
}

EpisodeResult run_episode(const TargetTrajectory& target, const SimClock& clock,
                          ChannelModel& channel, const VelocitySets& sets,
                          const Vec3& bs, Rng& rng) {
  clock.validate();
  const double T = clock.tti_s;

  MotionLog log(target.waypoint(0));
  struct Pending {
    CncRecord cnc;
    double t;
  };
  std::vector<Pending> pending;  // future arrivals, ascending by t
  Vec3 vel{0, 0, 0};
  bool executing = false;
  double exec_end = 0.0;
  double now = 0.0;
  long tx = 0, dec = 0;
  std::vector<std::optional<double>> latency(clock.n_tti);

  // Plays out motion and delivery events strictly before t_target; events
  // exactly at t_target belong to the next window.
  auto advance_to = [&](double t_target) {
    for (;;) {
      double t_ev = std::numeric_limits<double>::infinity();
      bool ev_arrival = false;
      if (executing && exec_end < t_target) t_ev = exec_end;
      if (!pending.empty() && pending.front().t < t_target &&
          pending.front().t <= t_ev) {
        t_ev = pending.front().t;
        ev_arrival = true;
      }
      if (t_ev == std::numeric_limits<double>::infinity()) break;
      if (t_ev > now) {
        log.append(vel, now, t_ev);
        now = t_ev;
      }
      if (ev_arrival) {
        CncRecord cnc = pending.front().cnc;
        pending.erase(pending.begin());
        cnc.arrival_time = t_ev;
        vel = cnc.velocity;
        executing = true;
        exec_end = t_ev + T;  // preempts any ongoing execution
      } else {
        vel = {0, 0, 0};
        executing = false;
      }
    }
    if (t_target > now) {
      log.append(vel, now, t_target);
      now = t_target;
    }
  };

  for (int i = 1; i <= clock.n_tti; ++i) {
    const double t0 = clock.tti_start(i);
    const double t1 = clock.tti_start(i + 1);
    const Vec3 last_known = log.end_position();  // ideal uplink of p_{i-1}
    const Vec3 m = generate(last_known, target.waypoint(i), T, sets);

    const ChannelDraw draw = channel.sample(bs, last_known, rng);
    ++tx;
    if (draw.decoded) {
      ++dec;
      const double t_arr = t0 + draw.tx_time_s;
      const Pending entry{CncRecord{i, m, t0, std::nullopt}, t_arr};
      pending.insert(std::upper_bound(pending.begin(), pending.end(), t_arr,
                                      [](double t, const Pending& p) { return t < p.t; }),
                     entry);
      latency[i - 1] = draw.tx_time_s;
    }
    advance_to(t1);
  }
  return finish_episode(std::move(log), target, clock, tx, dec, std::move(latency));
}

}  // namespace gsrc::tucf
