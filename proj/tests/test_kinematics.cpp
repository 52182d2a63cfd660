#include "gsrc/kinematics.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gsrc/rng.hpp"

using namespace gsrc;

TEST_CASE("motion log") {
  MotionLog log({1, 2, 3});
  CHECK(log.position_at(0.0) == Vec3{1, 2, 3});
  CHECK(log.end_time() == 0.0);

  log.append({2, 0, 0}, 0.0, 0.5);
  log.append({0, -4, 0}, 0.5, 1.0);

  SUBCASE("piecewise evaluation") {
    CHECK(log.position_at(0.25) == Vec3{1.5, 2, 3});
    CHECK(log.position_at(0.5) == Vec3{2, 2, 3});
    CHECK(log.position_at(0.75) == Vec3{2, 1, 3});
    CHECK(log.position_at(1.0) == Vec3{2, 0, 3});
    CHECK(log.end_position() == Vec3{2, 0, 3});
  }
  SUBCASE("continuity at interior boundaries") {
    const double eps = 1e-12;
    CHECK(distance(log.position_at(0.5 - eps), log.position_at(0.5 + eps)) < 1e-9);
  }
  SUBCASE("gap and out-of-order appends rejected") {
    CHECK_THROWS_AS(log.append({1, 0, 0}, 1.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(log.append({1, 0, 0}, 0.25, 0.75), std::invalid_argument);
    CHECK_THROWS_AS(log.append({1, 0, 0}, 1.0, 1.0), std::invalid_argument);
  }
  SUBCASE("queries outside the log rejected") {
    CHECK_THROWS_AS(log.position_at(-0.1), std::out_of_range);
    CHECK_THROWS_AS(log.position_at(1.1), std::out_of_range);
  }
}

TEST_CASE("target trajectory") {
  const double T = 1e-3;
  TargetTrajectory traj({{0, 0, 0}, {1, 0, 0}, {1, 2, 0}}, T);

  CHECK(traj.position_at(0.0) == Vec3{0, 0, 0});
  CHECK(traj.position_at(T) == Vec3{1, 0, 0});
  CHECK(traj.position_at(2 * T) == Vec3{1, 2, 0});
  CHECK(traj.position_at(0.5 * T) == Vec3{0.5, 0, 0});
  CHECK(distance(traj.position_at(1.25 * T), {1, 0.5, 0}) < 1e-12);

  CHECK_THROWS_AS(traj.position_at(-T), std::out_of_range);
  CHECK_THROWS_AS(traj.position_at(3 * T), std::out_of_range);
  CHECK_THROWS_AS(TargetTrajectory({{0, 0, 0}}, T), std::invalid_argument);
}

namespace {

SimClock small_clock(int n_tti) {
  SimClock c;
  c.n_tti = n_tti;
  return c;
}

// Straight-line waypoints matched by one constant-velocity segment.
void build_matched(int n_tti, MotionLog& log, std::vector<Vec3>& wp) {
  const double T = 1e-3;
  const Vec3 v{3000, -1000, 0};
  wp.clear();
  for (int i = 0; i <= n_tti; ++i) wp.push_back(Vec3{5, 5, 20} + v * (i * T));
  log.append(v, 0.0, n_tti * T);
}

}  // namespace

TEST_CASE("mse basics") {
  SUBCASE("perfect tracking gives zero") {
    MotionLog log({5, 5, 20});
    std::vector<Vec3> wp;
    build_matched(4, log, wp);
    const TargetTrajectory traj(wp, 1e-3);
    CHECK(mse(log, traj, small_clock(4)) < 1e-18);
  }
  SUBCASE("constant unit offset gives one") {
    MotionLog log({6, 5, 20});
    std::vector<Vec3> wp;
    {
      MotionLog ref({5, 5, 20});
      build_matched(4, ref, wp);
    }
    log.append({3000, -1000, 0}, 0.0, 4e-3);
    const TargetTrajectory traj(wp, 1e-3);
    CHECK(mse(log, traj, small_clock(4)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("incomplete log rejected") {
    MotionLog log({0, 0, 0});
    log.append({0, 0, 0}, 0.0, 2e-3);
    const TargetTrajectory traj({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 1, 0}}, 1e-3);
    CHECK_THROWS_AS(mse(log, traj, small_clock(3)), std::invalid_argument);
  }
}

TEST_CASE("mse matches a brute-force evaluation on a random instance") {
  // Independent oracle: positions recomputed directly from segment and
  // waypoint formulas instead of the MotionLog/TargetTrajectory accessors.
  Rng rng(99);
  const double T = 1e-3;
  const int n_tti = 2, n_m = 9;

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec3> wp;
    for (int i = 0; i <= n_tti; ++i) {
      wp.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(15, 25)});
    }
    const Vec3 p0{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(15, 25)};
    struct Seg {
      double t0, t1;
      Vec3 v;
    };
    std::vector<Seg> segs;
    double t = 0.0;
    MotionLog log(p0);
    while (t < n_tti * T) {
      const double dt = rng.uniform(0.1e-3, 0.9e-3);
      const double t1 = std::min(t + dt, n_tti * T);
      const Vec3 v{rng.uniform(-5000, 5000), rng.uniform(-5000, 5000), 0};
      segs.push_back({t, t1, v});
      log.append(v, t, t1);
      t = t1;
    }

    double sum = 0.0;
    for (int i = 1; i <= n_tti; ++i) {
      for (int j = 1; j <= n_m; ++j) {
        const double ts = (i - 1) * T + (static_cast<double>(j) / n_m) * T;
        Vec3 p = p0;
        for (const Seg& s : segs) {
          const double overlap = std::max(0.0, std::min(ts, s.t1) - s.t0);
          p += s.v * overlap;
        }
        const int k = std::min(static_cast<int>(std::floor(ts / T + 1e-9)), n_tti - 1);
        const double frac = (ts - k * T) / T;
        const Vec3 g = wp[k] + (wp[k + 1] - wp[k]) * frac;
        sum += (p - g).squared_norm();
      }
    }
    const double expected = sum / (n_tti * n_m);

    SimClock clock;
    clock.n_tti = n_tti;
    clock.n_m = n_m;
    const TargetTrajectory traj(wp, T);
    CHECK(mse(log, traj, clock) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("mse translation invariance") {
  Rng rng(5);
  const double T = 1e-3;
  SimClock clock = small_clock(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 shift{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-5, 5)};
    std::vector<Vec3> wp, wp_shifted;
    for (int i = 0; i <= 3; ++i) {
      const Vec3 g{rng.uniform(-10, 10), rng.uniform(-10, 10), 20.0};
      wp.push_back(g);
      wp_shifted.push_back(g + shift);
    }
    const Vec3 p0{rng.uniform(-10, 10), rng.uniform(-10, 10), 20.0};
    const Vec3 v{rng.uniform(-5000, 5000), rng.uniform(-5000, 5000), 0};
    MotionLog a(p0), b(p0 + shift);
    a.append(v, 0.0, 3 * T);
    b.append(v, 0.0, 3 * T);
    const double ma = mse(a, TargetTrajectory(wp, T), clock);
    const double mb = mse(b, TargetTrajectory(wp_shifted, T), clock);
    CHECK(ma == doctest::Approx(mb).epsilon(1e-9));
  }
}
