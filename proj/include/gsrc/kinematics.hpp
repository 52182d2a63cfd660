#pragma once

#include <vector>

#include "gsrc/vec3.hpp"

namespace gsrc {

// TTI grid shared by every component: n_tti slots of tti_s seconds, with
// n_m tracking-error samples per slot.
struct SimClock {
  double tti_s = 1e-3;
  int n_tti = 99;
  int n_m = 9;

  double horizon() const { return tti_s * n_tti; }
  double tti_start(int i) const { return (i - 1) * tti_s; }  // i is 1-based
  void validate() const;
};

// Piecewise-constant-velocity motion record over [start, end].
class MotionLog {
 public:
  struct Segment {
    double t0, t1;
    Vec3 p0;  // position at t0
    Vec3 v;
  };

  explicit MotionLog(const Vec3& start, double t_start = 0.0);

  // Appends one constant-velocity segment; t_from must continue the log end.
  void append(const Vec3& velocity, double t_from, double t_to);

  Vec3 position_at(double t) const;
  double start_time() const { return t_start_; }
  double end_time() const { return t_end_; }
  const Vec3& end_position() const { return p_end_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  double t_start_, t_end_;
  Vec3 p_start_, p_end_;
  std::vector<Segment> segments_;
};

// Target waypoints g_0..g_n on TTI boundaries, linearly interpolated between.
class TargetTrajectory {
 public:
  TargetTrajectory(std::vector<Vec3> waypoints, double tti_s);

  Vec3 position_at(double t) const;
  const Vec3& waypoint(int i) const { return waypoints_[i]; }  // 0-based
  int waypoint_count() const { return static_cast<int>(waypoints_.size()); }
  double horizon() const { return tti_s_ * (waypoint_count() - 1); }

 private:
  std::vector<Vec3> waypoints_;
  double tti_s_;
};

struct TrackSample {
  int tti;    // 1-based slot index
  int j;      // 1-based sample index within the slot
  double t;
  Vec3 p, g;
  double err;  // |p - g|
};

// Tracking samples on the n_m-per-TTI grid; the log must cover the horizon.
std::vector<TrackSample> track_samples(const MotionLog& log,
                                       const TargetTrajectory& target,
                                       const SimClock& clock);

// Mean squared tracking error over the sample grid.
double mse(const MotionLog& log, const TargetTrajectory& target,
           const SimClock& clock);

}  // namespace gsrc
