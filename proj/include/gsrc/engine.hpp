#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsrc/agent.hpp"
#include "gsrc/channel.hpp"
#include "gsrc/cnc.hpp"
#include "gsrc/episode.hpp"
#include "gsrc/kinematics.hpp"
#include "gsrc/repetition.hpp"
#include "gsrc/rng.hpp"
#include "gsrc/vaqom.hpp"
#include "gsrc/vec3.hpp"
#include "gsrc/velocity_grid.hpp"

namespace gsrc {

// The four downlink schemes under comparison. They differ along two axes:
// how commands are generated (nearest-grid rule vs. trained Q-network) and
// how the receiver treats copies (execute-on-arrival slot vs. value-ordered
// semantic queue), plus whether the sender repeats copies proactively.
enum class Scheme { tucf, vaqom, deeppro, gsrc };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);  // case-insensitive; throws

bool scheme_uses_dqn(Scheme s);
bool scheme_uses_repetition(Scheme s);
bool scheme_uses_semantic_queue(Scheme s);

struct EngineConfig {
  SimClock clock;
  Vec3 bs_pos{0.0, 0.0, 0.0};
  VelocitySets velocities = VelocitySets::defaults();
  // Engaged only for repetition schemes; nullopt forces single-shot sending
  // even for them (used to check the k_max=1 collapse).
  std::optional<repetition::RepetitionParams> rep = repetition::RepetitionParams{};
  int q_max = 10;
  // Debug observer, fired after every semantic-queue rescoring. Meant for
  // single-episode inspection; run_batch shares the config across workers.
  std::function<void(double t, const vaqom::SemanticQueue&)> queue_hook;

  void validate() const;
};

// Runs one episode slot by slot. The caller supplies each slot's command;
// the runner owns the receiver state machine (arrival slot or semantic
// queue), the downlink sends, and the motion log.
class EpisodeRunner final : public repetition::TransmissionContext {
 public:
  EpisodeRunner(Scheme scheme, const TargetTrajectory& target,
                const EngineConfig& cfg, ChannelModel& channel, Rng rng);

  bool done() const { return next_tti_ > cfg_.clock.n_tti; }
  int next_tti() const { return next_tti_; }
  // Slot-start knowledge for the generator (position uplinked at the
  // boundary). Valid between steps and after the last one.
  AgentState agent_state() const;

  // Executes one slot with command m; returns the per-slot reward, the
  // negated distance to that slot's target waypoint at the slot end.
  double step(const Vec3& m);

  // Consumes the runner; call once after done().
  EpisodeResult finish();

  // TransmissionContext (driven by the proactive repetition loop, and used
  // internally for single-shot slots too).
  void advance_to(double t) override;
  Vec3 current_position() const override;
  void deliver_at(const CncRecord& cnc, double arrival_time) override;

 private:
  struct PendingArrival {
    CncRecord cnc;
    double t;
  };

  void process_arrival(const CncRecord& cnc, double t);

  Scheme scheme_;
  const TargetTrajectory* target_;
  EngineConfig cfg_;
  ChannelModel* channel_;
  Rng rng_;

  MotionLog log_;
  vaqom::UavHistory history_;
  vaqom::SemanticQueue queue_;
  std::vector<PendingArrival> pending_;  // ascending arrival time
  Vec3 vel_{0.0, 0.0, 0.0};
  double now_ = 0.0;
  bool slot_active_ = false;  // arrival-slot receiver only
  double exec_end_ = 0.0;
  int next_tti_ = 1;
  long tx_ = 0;
  long dec_ = 0;
  std::vector<std::optional<double>> latency_;
  bool finished_ = false;
};

// Full-episode convenience wrapper. Non-DQN schemes use the nearest-grid
// rule against the next waypoint; DQN schemes require a policy.
EpisodeResult run_episode(Scheme scheme, const TargetTrajectory& target,
                          const EngineConfig& cfg, ChannelModel& channel,
                          const Policy& policy, Rng rng);

struct BatchOptions {
  int episodes = 1;
  std::uint64_t base_seed = 1;
  int threads = 1;   // 0 = hardware concurrency
  int keep_first = 0;  // retain full results for this many leading episodes
};

struct BatchSummary {
  int episodes = 0;
  double mse_mean = 0.0;
  double mse_std = 0.0;      // sample std-dev over episode MSEs (n-1)
  double tx_mean = 0.0;      // mean sends per slot
  double decode_rate = 0.0;  // mean per-episode decoded/sent
};

struct BatchResult {
  BatchSummary summary;
  std::vector<double> episode_mse;
  std::vector<EpisodeResult> episodes;  // populated only if keep_episodes
};

// Runs independent episodes with per-episode seeds derived from base_seed
// by episode index; results aggregate in index order, so the output is
// identical for any thread count. The channel model and policy must be
// stateless (the stock stochastic/ideal channels are).
BatchResult run_batch(Scheme scheme, const TargetTrajectory& target,
                      const EngineConfig& cfg, ChannelModel& channel,
                      const Policy& policy, const BatchOptions& opts);

enum class TrajectoryKind { random_walk, waypoint_demo };

TrajectoryKind trajectory_kind_from_name(std::string_view name);
const char* trajectory_kind_name(TrajectoryKind k);

// Ground-target path over the episode horizon, starting at `start`.
// random_walk: per-slot displacement drawn uniformly from the velocity grid,
// rejected if it would leave the horizontal disk of radius `radius_m` around
// the start or change altitude. waypoint_demo: a fixed rectangular circuit.
TargetTrajectory make_trajectory(TrajectoryKind kind, const SimClock& clock,
                                 const VelocitySets& sets, Vec3 start,
                                 double radius_m, std::uint64_t seed);

}  // namespace gsrc
