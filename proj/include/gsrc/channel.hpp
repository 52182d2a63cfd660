#pragma once

#include "gsrc/rng.hpp"
#include "gsrc/vec3.hpp"

namespace gsrc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

double db_to_linear(double db);
double linear_to_db(double linear);  // errors on non-positive input
double dbm_to_mw(double dbm);

// Air-to-ground link parameters. Excessive path losses eta_* are stored as
// linear factors (>= 1); config-level keys take dB and convert on load.
struct ChannelParams {
  double a = 9.61;        // LoS logistic shape
  double b = 0.16;        // LoS logistic slope, 1/degree
  double fc_hz = 5e9;     // carrier frequency
  double alpha = 2.0;     // path loss exponent
  double eta_los = 1.2589254117941673;   // 1 dB
  double eta_nlos = 100.0;               // 20 dB
  double noise_dbm = -104.0;
  double tx_power_dbm = 18.0;
  double bandwidth_hz = 1e6;
  double snr_threshold_db = 5.5;
  double cnc_bits = 832.0;  // C&C payload size

  void validate() const;  // throws std::invalid_argument naming the field
};

// One downlink transmission attempt.
struct ChannelDraw {
  bool los = false;
  double fading = 0.0;    // small-scale power gain |beta|^2, Exp(1)
  double snr = 0.0;       // linear receive SNR
  bool decoded = false;   // snr strictly above the linear threshold
  double tx_time_s = 0.0; // +infinity when snr == 0 (packet never arrives)
};

// Elevation-dependent LoS probability; distance must be positive.
double los_probability(const ChannelParams& p, const Vec3& bs, const Vec3& uav);

// Distance-frequency factor (4 pi d fc / c)^alpha of the large-scale loss.
double path_loss_factor(const ChannelParams& p, double distance_m);

// Payload transmit time at Shannon rate; +infinity at zero SNR.
double transmit_time(double snr_linear, double bits, double bandwidth_hz);

// Deterministic tail of a draw given the random LoS state and fading power.
ChannelDraw evaluate_draw(const ChannelParams& p, const Vec3& bs, const Vec3& uav,
                          bool los, double fading);

class ChannelModel {
 public:
  virtual ~ChannelModel() = default;
  virtual ChannelDraw sample(const Vec3& bs, const Vec3& uav, Rng& rng) = 0;
};

class StochasticChannel final : public ChannelModel {
 public:
  explicit StochasticChannel(const ChannelParams& params);
  ChannelDraw sample(const Vec3& bs, const Vec3& uav, Rng& rng) override;
  const ChannelParams& params() const { return params_; }

 private:
  ChannelParams params_;
};

// Lossless zero-delay link; limit case used by tests and diagnostics.
class IdealChannel final : public ChannelModel {
 public:
  ChannelDraw sample(const Vec3& bs, const Vec3& uav, Rng& rng) override;
};

}  // namespace gsrc
