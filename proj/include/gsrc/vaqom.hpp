#pragma once

#include <vector>

#include "gsrc/cnc.hpp"
#include "gsrc/kinematics.hpp"

namespace gsrc::vaqom {

// Relative slack for slot-boundary comparisons. Doubles cannot represent
// i*T - (i-1)*T == T exactly for most i, so freshness and slot indexing
// snap to the boundary; equality counts as the boundary being reached.
inline constexpr double kBoundarySnap = 1e-9;

// 1-based index of the slot being executed at `now`; now must lie in
// [0, horizon).
int execution_tti_index(double now, const SimClock& clock);

// Age of information of a command at `now`; now must not precede generation.
double aoi(const CncRecord& cnc, double now);

struct QueueEntry {
  CncRecord cnc;
  double aoi_s = 0.0;
  double voi = 0.0;
  double si = 0.0;
};

// The UAV's own positions at slot boundaries, indexed from boundary 0.
class UavHistory {
 public:
  explicit UavHistory(const Vec3& start) : p_{start} {}
  void record(const Vec3& p) { p_.push_back(p); }
  const Vec3& at_boundary(int i) const;
  int size() const { return static_cast<int>(p_.size()); }

 private:
  std::vector<Vec3> p_;
};

// Estimated target: intended endpoint of the newest command, reconstructed
// from the logged own position at that command's generation boundary.
// Ties on age resolve to the smaller slot index.
Vec3 estimate_target(const std::vector<QueueEntry>& entries,
                     const UavHistory& history, const SimClock& clock);

// Predicted own position at the executing slot's end if `entry` runs from
// `now` onward.
Vec3 estimate_actual(const QueueEntry& entry, const Vec3& current_pos,
                     double now, const SimClock& clock);

// Negative distance between the predicted own position and the estimated
// target; never positive.
double value_of_information(const Vec3& est_actual, const Vec3& est_target);

// Commands younger than one slot score 1; older ones decay with e^{VoI}.
double semantic_info(double aoi_s, double voi, const SimClock& clock);

// Priority queue ordered by semantic information, capacity q_max.
class SemanticQueue {
 public:
  explicit SemanticQueue(int q_max);

  // Adds a delivered command; call reorder() at the same instant. At most
  // one entry per generation slot may be present.
  void insert(const CncRecord& cnc);

  // Rescores every entry at `now` and sorts by descending semantic
  // information (ties: smaller age, then smaller slot index). Entries
  // beyond the capacity are dropped from the low-score end.
  void reorder(double now, const Vec3& current_pos, const UavHistory& history,
               const SimClock& clock);

  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }
  const QueueEntry& head() const;
  const std::vector<QueueEntry>& entries() const { return entries_; }

 private:
  int q_max_;
  std::vector<QueueEntry> entries_;
};

}  // namespace gsrc::vaqom
