#include "gsrc/channel.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace gsrc;

namespace {

const Vec3 kBs{0, 0, 0};

ChannelParams defaults() { return ChannelParams{}; }

}  // namespace

TEST_CASE("db conversions") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-12));
  // 10^0.55, frozen from an independent evaluation.
  CHECK(db_to_linear(5.5) == doctest::Approx(3.548133892335755).epsilon(1e-12));
  CHECK(linear_to_db(1000.0) == doctest::Approx(30.0).epsilon(1e-12));
  for (double v : {0.01, 0.5, 1.0, 3.548, 1e6}) {
    CHECK(db_to_linear(linear_to_db(v)) == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK_THROWS_AS(linear_to_db(0.0), std::domain_error);
  CHECK_THROWS_AS(linear_to_db(-3.0), std::domain_error);
}

TEST_CASE("los probability") {
  const ChannelParams p = defaults();

  SUBCASE("overhead geometry is almost surely LoS") {
    // uav straight above the bs: theta = 90 degrees.
    const double v = los_probability(p, kBs, {0, 0, 120});
    CHECK(v == doctest::Approx(0.999975074537903).epsilon(1e-12));
  }
  SUBCASE("45 degree elevation") {
    const double v = los_probability(p, kBs, {100, 0, 100});
    CHECK(v == doctest::Approx(0.9676918999472423).epsilon(1e-12));
  }
  SUBCASE("theta equal to a gives 1/(1+a)") {
    const double s = std::sin(9.61 * 3.14159265358979323846 / 180.0);
    const Vec3 uav{std::sqrt(1.0 - s * s), 0, s};
    CHECK(los_probability(p, kBs, uav) ==
          doctest::Approx(1.0 / (1.0 + 9.61)).epsilon(1e-12));
  }
  SUBCASE("monotone in elevation") {
    double prev = 0.0;
    for (double z : {10.0, 30.0, 60.0, 90.0, 119.0}) {
      const double v = los_probability(p, kBs, {std::sqrt(120.0 * 120.0 - z * z), 0, z});
      CHECK(v > prev);
      CHECK(v > 0.0);
      CHECK(v < 1.0);
      prev = v;
    }
  }
  SUBCASE("coincident endpoints error") {
    CHECK_THROWS_AS(los_probability(p, kBs, kBs), std::invalid_argument);
  }
}

TEST_CASE("transmit time") {
  // 832 bits over 1 MHz at SNR 3: log2(4) = 2 -> 4.16e-4 s.
  CHECK(transmit_time(3.0, 832.0, 1e6) == doctest::Approx(4.16e-4).epsilon(1e-12));
  CHECK(transmit_time(0.0, 832.0, 1e6) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(transmit_time(-1.0, 832.0, 1e6), std::invalid_argument);

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double s1 = rng.uniform(1e-6, 1e4);
    const double s2 = s1 * rng.uniform(1.0001, 10.0);
    CHECK(transmit_time(s2, 832.0, 1e6) < transmit_time(s1, 832.0, 1e6));
  }
}

TEST_CASE("draw evaluation") {
  SUBCASE("zero fading never decodes and never arrives") {
    const ChannelDraw d = evaluate_draw(defaults(), kBs, {80, 80, 20}, true, 0.0);
    CHECK(d.snr == 0.0);
    CHECK_FALSE(d.decoded);
    CHECK(d.tx_time_s == std::numeric_limits<double>::infinity());
  }
  SUBCASE("snr exactly at threshold does not decode") {
    // 0 dBm power over 0 dBm noise and a 0 dB threshold: choosing the fading
    // equal to the loss makes snr exactly 1.0, which must not pass a strict
    // threshold of 1.0.
    ChannelParams p = defaults();
    p.tx_power_dbm = 0.0;
    p.noise_dbm = 0.0;
    p.snr_threshold_db = 0.0;
    p.eta_los = 1.0;
    const Vec3 uav{80, 80, 20};
    const double loss = path_loss_factor(p, distance(kBs, uav));
    const ChannelDraw d = evaluate_draw(p, kBs, uav, true, loss);
    CHECK(d.snr == 1.0);
    CHECK_FALSE(d.decoded);
  }
  SUBCASE("decoded iff snr above threshold") {
    Rng rng(11);
    const ChannelParams p = defaults();
    const double gamma = db_to_linear(p.snr_threshold_db);
    for (int i = 0; i < 500; ++i) {
      const ChannelDraw d =
          evaluate_draw(p, kBs, {80, 80, 20}, rng.bernoulli(0.5), rng.exponential());
      CHECK(d.decoded == (d.snr > gamma));
      if (d.snr > 0.0) CHECK(d.tx_time_s > 0.0);
    }
  }
  SUBCASE("nlos attenuates harder than los") {
    const ChannelDraw l = evaluate_draw(defaults(), kBs, {80, 80, 20}, true, 1.0);
    const ChannelDraw n = evaluate_draw(defaults(), kBs, {80, 80, 20}, false, 1.0);
    CHECK(l.snr > n.snr);
  }
  SUBCASE("snr decreases with distance") {
    const ChannelDraw near = evaluate_draw(defaults(), kBs, {40, 40, 20}, true, 1.0);
    const ChannelDraw far = evaluate_draw(defaults(), kBs, {160, 160, 20}, true, 1.0);
    CHECK(near.snr > far.snr);
  }
}

TEST_CASE("parameter validation") {
  ChannelParams p = defaults();
  p.eta_los = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = defaults();
  p.eta_nlos = 1.0;
  p.eta_los = 2.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = defaults();
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = defaults();
  p.bandwidth_hz = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(defaults().validate());
}

TEST_CASE("stochastic channel determinism") {
  StochasticChannel ch(defaults());
  Rng a(123), b(123), c(124);
  bool diverged = false;
  for (int i = 0; i < 100; ++i) {
    const ChannelDraw da = ch.sample(kBs, {80, 80, 20}, a);
    const ChannelDraw db = ch.sample(kBs, {80, 80, 20}, b);
    const ChannelDraw dc = ch.sample(kBs, {80, 80, 20}, c);
    CHECK(da.snr == db.snr);
    CHECK(da.los == db.los);
    CHECK(da.decoded == db.decoded);
    if (da.snr != dc.snr) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("monte carlo statistics at the reference geometry") {
  // Empirical LoS rate and decode rate against the analytic mixture
  //   p = P_los exp(-g s2 F eta_l / P) + (1 - P_los) exp(-g s2 F eta_n / P)
  // evaluated independently for bs (0,0,0), uav (80,80,20).
  const ChannelParams p = defaults();
  StochasticChannel ch(p);
  Rng rng(2026);
  const Vec3 uav{80, 80, 20};
  const int n = 100000;
  int los = 0, decoded = 0;
  for (int i = 0; i < n; ++i) {
    const ChannelDraw d = ch.sample(kBs, uav, rng);
    los += d.los ? 1 : 0;
    decoded += d.decoded ? 1 : 0;
  }
  const double p_los = 0.10007368122228674;
  const double p_dec = 0.8902853775091312;
  const double se_los = std::sqrt(p_los * (1.0 - p_los) / n);
  const double se_dec = std::sqrt(p_dec * (1.0 - p_dec) / n);
  CHECK(std::abs(static_cast<double>(los) / n - p_los) < 3.0 * se_los);
  CHECK(std::abs(static_cast<double>(decoded) / n - p_dec) < 3.0 * se_dec);
}
