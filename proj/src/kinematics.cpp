#include "gsrc/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsrc {

// Absolute slack for time comparisons; covers rounding in i*T arithmetic
// without masking real gaps (all simulated times are well below 1e3 s).
constexpr double kTimeTol = 1e-9;

void SimClock::validate() const {
  if (!(tti_s > 0.0)) throw std::invalid_argument("clock.tti_s must be positive");
  if (n_tti < 1) throw std::invalid_argument("clock.n_tti must be >= 1");
  if (n_m < 1) throw std::invalid_argument("clock.n_m must be >= 1");
}

MotionLog::MotionLog(const Vec3& start, double t_start)
    : t_start_(t_start), t_end_(t_start), p_start_(start), p_end_(start) {}

void MotionLog::append(const Vec3& velocity, double t_from, double t_to) {
  if (std::abs(t_from - t_end_) > kTimeTol) {
    throw std::invalid_argument("MotionLog::append: segment does not continue the log");
  }
  if (!(t_to > t_end_)) {
    throw std::invalid_argument("MotionLog::append: segment end not after log end");
  }
  segments_.push_back({t_end_, t_to, p_end_, velocity});
  p_end_ += velocity * (t_to - t_end_);
  t_end_ = t_to;
}

Vec3 MotionLog::position_at(double t) const {
  if (t < t_start_ - kTimeTol || t > t_end_ + kTimeTol) {
    throw std::out_of_range("MotionLog::position_at: time outside the log");
  }
  const double tc = std::clamp(t, t_start_, t_end_);
  if (segments_.empty()) return p_start_;
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), tc,
      [](double value, const Segment& s) { return value < s.t0; });
  if (it == segments_.begin()) return p_start_;
  const Segment& seg = *(it - 1);
  return seg.p0 + seg.v * (std::min(tc, seg.t1) - seg.t0);
}

TargetTrajectory::TargetTrajectory(std::vector<Vec3> waypoints, double tti_s)
    : waypoints_(std::move(waypoints)), tti_s_(tti_s) {
  if (waypoints_.size() < 2) {
    throw std::invalid_argument("TargetTrajectory: needs at least two waypoints");
  }
  if (!(tti_s_ > 0.0)) {
    throw std::invalid_argument("TargetTrajectory: tti_s must be positive");
  }
}

Vec3 TargetTrajectory::position_at(double t) const {
  if (t < -kTimeTol || t > horizon() + kTimeTol) {
    throw std::out_of_range("TargetTrajectory::position_at: time outside horizon");
  }
  const int last = waypoint_count() - 2;
  // Small forward bias keeps boundary queries at i*tti_s in slot i.
  int i = static_cast<int>(std::floor(t / tti_s_ + 1e-9));
  i = std::clamp(i, 0, last);
  const double frac = std::clamp((t - i * tti_s_) / tti_s_, 0.0, 1.0);
  return waypoints_[i] + (waypoints_[i + 1] - waypoints_[i]) * frac;
}

std::vector<TrackSample> track_samples(const MotionLog& log,
                                       const TargetTrajectory& target,
                                       const SimClock& clock) {
  clock.validate();
  if (log.end_time() < clock.horizon() - kTimeTol) {
    throw std::invalid_argument("track_samples: motion log does not cover the horizon");
  }
  std::vector<TrackSample> out;
  out.reserve(static_cast<std::size_t>(clock.n_tti) * clock.n_m);
  for (int i = 1; i <= clock.n_tti; ++i) {
    for (int j = 1; j <= clock.n_m; ++j) {
      const double t = clock.tti_start(i) +
                       clock.tti_s * (static_cast<double>(j) / clock.n_m);
      const Vec3 p = log.position_at(std::min(t, log.end_time()));
      const Vec3 g = target.position_at(t);
      out.push_back({i, j, t, p, g, distance(p, g)});
    }
  }
  return out;
}

double mse(const MotionLog& log, const TargetTrajectory& target,
           const SimClock& clock) {
  clock.validate();
  if (log.end_time() < clock.horizon() - kTimeTol) {
    throw std::invalid_argument("mse: motion log does not cover the horizon");
  }
  double sum = 0.0;
  for (int i = 1; i <= clock.n_tti; ++i) {
    for (int j = 1; j <= clock.n_m; ++j) {
      const double t = clock.tti_start(i) +
                       clock.tti_s * (static_cast<double>(j) / clock.n_m);
      const Vec3 p = log.position_at(std::min(t, log.end_time()));
      sum += (p - target.position_at(t)).squared_norm();
    }
  }
  return sum / (static_cast<double>(clock.n_tti) * clock.n_m);
}

}  // namespace gsrc
