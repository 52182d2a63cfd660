#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsrc/channel.hpp"
#include "gsrc/dqn.hpp"
#include "gsrc/engine.hpp"

namespace gsrc {

// Raised for anything the operator can fix in the config file or on the
// command line: unknown keys, bad values, violated invariants.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Whole-experiment settings. Defaults reproduce the headline comparison:
// 99 slots of 1 ms, the 11x11 planar velocity grid, the stochastic
// air-to-ground channel, and a 2000-episode training budget.
struct ExperimentConfig {
  // run
  std::uint64_t base_seed = 1;
  int episodes = 1000;
  int threads = 0;  // 0 = hardware concurrency
  std::vector<Scheme> schemes{Scheme::tucf, Scheme::vaqom, Scheme::deeppro,
                              Scheme::gsrc};
  std::string out_dir = "out";
  int trajectory_episodes = 1;  // leading episodes written to trajectory.csv

  // clock
  SimClock clock;

  // channel (excess losses kept in dB so dumps round-trip exactly)
  double ch_a = 9.61;
  double ch_b = 0.16;
  double ch_fc_hz = 5e9;
  double ch_alpha = 2.0;
  double ch_eta_los_db = 1.0;
  double ch_eta_nlos_db = 20.0;
  double ch_noise_dbm = -104.0;
  double ch_tx_power_dbm = 18.0;
  double ch_bandwidth_hz = 1e6;
  double ch_snr_threshold_db = 5.5;
  double ch_cnc_bits = 832.0;
  bool ch_ideal = false;

  Vec3 bs_pos{0.0, 0.0, 0.0};

  // downlink repetition
  repetition::RepetitionParams rep;

  // receiver queue
  int q_max = 10;
  bool queue_log = false;

  VelocitySets velocities = VelocitySets::defaults();

  // target trajectory. A tight walk disk keeps the target mean-reverting,
  // which is what makes value-ordered queueing of stale commands pay off;
  // widen the disk and old commands carry no information.
  TrajectoryKind trajectory_kind = TrajectoryKind::random_walk;
  std::uint64_t trajectory_seed = 12;
  double trajectory_radius_m = 5.0;
  Vec3 start{80.0, 80.0, 20.0};

  // agent training
  dqn::TrainerConfig trainer;
  Scheme trainer_scheme = Scheme::gsrc;

  ChannelParams channel_params() const;
  EngineConfig engine_config() const;
  void validate() const;  // throws ConfigError
};

// Parses and validates; absent keys keep their defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in, const std::string& name);

// Applies one key = value pair to an existing config; used for command-line
// overrides. Validation is the caller's job (override batches first).
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

// Full key set in canonical order; parse(dump(c)) reproduces c exactly.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace gsrc
