#include "gsrc/vaqom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsrc::vaqom {

int execution_tti_index(double now, const SimClock& clock) {
  clock.validate();
  if (now < 0.0) {
    throw std::out_of_range("execution_tti_index: negative time");
  }
  const int idx = static_cast<int>(std::floor(now / clock.tti_s + kBoundarySnap)) + 1;
  if (idx > clock.n_tti) {
    throw std::out_of_range("execution_tti_index: time beyond the horizon");
  }
  return idx;
}

double aoi(const CncRecord& cnc, double now) {
  if (now < cnc.gen_time) {
    throw std::invalid_argument("aoi: time precedes generation");
  }
  return now - cnc.gen_time;
}

const Vec3& UavHistory::at_boundary(int i) const {
  if (i < 0 || i >= size()) {
    throw std::out_of_range("UavHistory::at_boundary: index out of range");
  }
  return p_[static_cast<std::size_t>(i)];
}

Vec3 estimate_target(const std::vector<QueueEntry>& entries,
                     const UavHistory& history, const SimClock& clock) {
  if (entries.empty()) {
    throw std::invalid_argument("estimate_target: empty queue");
  }
  const QueueEntry* newest = &entries.front();
  for (const QueueEntry& e : entries) {
    if (e.cnc.gen_time > newest->cnc.gen_time ||
        (e.cnc.gen_time == newest->cnc.gen_time && e.cnc.tti < newest->cnc.tti)) {
      newest = &e;
    }
  }
  return history.at_boundary(newest->cnc.tti - 1) +
         newest->cnc.velocity * clock.tti_s;
}

Vec3 estimate_actual(const QueueEntry& entry, const Vec3& current_pos,
                     double now, const SimClock& clock) {
  const double t_next = execution_tti_index(now, clock) * clock.tti_s;
  return current_pos + entry.cnc.velocity * (t_next - now);
}

double value_of_information(const Vec3& est_actual, const Vec3& est_target) {
  return -distance(est_actual, est_target);
}

double semantic_info(double aoi_s, double voi, const SimClock& clock) {
  if (aoi_s < 0.0) {
    throw std::invalid_argument("semantic_info: negative age");
  }
  if (aoi_s < clock.tti_s * (1.0 - kBoundarySnap)) {
    return 1.0;
  }
  return std::exp(voi);
}

SemanticQueue::SemanticQueue(int q_max) : q_max_(q_max) {
  if (q_max_ < 1) {
    throw std::invalid_argument("SemanticQueue: capacity must be >= 1");
  }
}

void SemanticQueue::insert(const CncRecord& cnc) {
  if (size() > q_max_) {
    throw std::logic_error("SemanticQueue::insert: reorder() overdue");
  }
  for (const QueueEntry& e : entries_) {
    if (e.cnc.tti == cnc.tti) {
      throw std::invalid_argument("SemanticQueue::insert: duplicate slot entry");
    }
  }
  entries_.push_back(QueueEntry{cnc, 0.0, 0.0, 0.0});
}

void SemanticQueue::reorder(double now, const Vec3& current_pos,
                            const UavHistory& history, const SimClock& clock) {
  if (entries_.empty()) return;
  const Vec3 target = estimate_target(entries_, history, clock);
  for (QueueEntry& e : entries_) {
    e.aoi_s = aoi(e.cnc, now);
    e.voi = value_of_information(estimate_actual(e, current_pos, now, clock), target);
    e.si = semantic_info(e.aoi_s, e.voi, clock);
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const QueueEntry& a, const QueueEntry& b) {
                     if (a.si != b.si) return a.si > b.si;
                     if (a.aoi_s != b.aoi_s) return a.aoi_s < b.aoi_s;
                     return a.cnc.tti < b.cnc.tti;
                   });
  if (size() > q_max_) {
    entries_.resize(static_cast<std::size_t>(q_max_));
  }
}

const QueueEntry& SemanticQueue::head() const {
  if (entries_.empty()) {
    throw std::logic_error("SemanticQueue::head: queue is empty");
  }
  return entries_.front();
}

}  // namespace gsrc::vaqom
