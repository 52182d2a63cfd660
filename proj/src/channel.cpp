#include "gsrc/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) {
    throw std::domain_error("linear_to_db requires a positive value");
  }
  return 10.0 * std::log10(linear);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

void ChannelParams::validate() const {
  check_positive(a, "channel.a");
  check_positive(b, "channel.b");
  check_positive(fc_hz, "channel.fc_hz");
  check_positive(alpha, "channel.alpha");
  check_positive(bandwidth_hz, "channel.bandwidth_hz");
  check_positive(cnc_bits, "channel.cnc_bits");
  if (!(eta_los >= 1.0)) {
    throw std::invalid_argument("channel.eta_los must be >= 1 (linear)");
  }
  if (!(eta_nlos >= eta_los)) {
    throw std::invalid_argument("channel.eta_nlos must be >= channel.eta_los");
  }
  if (!std::isfinite(noise_dbm) || !std::isfinite(tx_power_dbm) ||
      !std::isfinite(snr_threshold_db)) {
    throw std::invalid_argument("channel power/threshold values must be finite");
  }
}

double los_probability(const ChannelParams& p, const Vec3& bs, const Vec3& uav) {
  const double d = distance(bs, uav);
  if (!(d > 0.0)) {
    throw std::invalid_argument("los_probability: endpoints coincide");
  }
  const double h = std::abs(uav.z - bs.z);
  const double theta_deg = (180.0 / kPi) * std::asin(h / d);
  return 1.0 / (1.0 + p.a * std::exp(-p.b * (theta_deg - p.a)));
}

double path_loss_factor(const ChannelParams& p, double distance_m) {
  check_positive(distance_m, "distance");
  return std::pow(4.0 * kPi * distance_m * p.fc_hz / kSpeedOfLight, p.alpha);
}

double transmit_time(double snr_linear, double bits, double bandwidth_hz) {
  if (snr_linear < 0.0) {
    throw std::invalid_argument("transmit_time: negative SNR");
  }
  if (snr_linear == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return bits / (bandwidth_hz * std::log2(1.0 + snr_linear));
}

ChannelDraw evaluate_draw(const ChannelParams& p, const Vec3& bs, const Vec3& uav,
                          bool los, double fading) {
  const double d = distance(bs, uav);
  if (!(d > 0.0)) {
    throw std::invalid_argument("evaluate_draw: endpoints coincide");
  }
  const double loss = path_loss_factor(p, d) * (los ? p.eta_los : p.eta_nlos);
  const double gain = fading / loss;
  const double snr = dbm_to_mw(p.tx_power_dbm) * gain / dbm_to_mw(p.noise_dbm);

  ChannelDraw draw;
  draw.los = los;
  draw.fading = fading;
  draw.snr = snr;
  draw.decoded = snr > db_to_linear(p.snr_threshold_db);
  draw.tx_time_s = transmit_time(snr, p.cnc_bits, p.bandwidth_hz);
  return draw;
}

StochasticChannel::StochasticChannel(const ChannelParams& params) : params_(params) {
  params_.validate();
}

ChannelDraw StochasticChannel::sample(const Vec3& bs, const Vec3& uav, Rng& rng) {
  const bool los = rng.bernoulli(los_probability(params_, bs, uav));
  const double fading = rng.exponential();
  return evaluate_draw(params_, bs, uav, los, fading);
}

ChannelDraw IdealChannel::sample(const Vec3&, const Vec3&, Rng&) {
  ChannelDraw draw;
  draw.los = true;
  draw.fading = 1.0;
  draw.snr = std::numeric_limits<double>::infinity();
  draw.decoded = true;
  draw.tx_time_s = 0.0;
  return draw;
}

}  // namespace gsrc
