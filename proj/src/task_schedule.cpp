#include "lockss/task_schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace lockss {

BusyIntervals::BusyIntervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
  for (const Interval& iv : intervals) {
    if (iv.end <= iv.start) continue;
    if (!intervals_.empty() && iv.start <= intervals_.back().end) {
      intervals_.back().end = std::max(intervals_.back().end, iv.end);
    } else {
      intervals_.push_back(iv);
    }
  }
}

const Interval* BusyIntervals::first_overlap(SimTime s, SimTime e) const {
  // First interval whose end is after s.
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), s,
                             [](SimTime t, const Interval& iv) { return t < iv.end; });
  if (it != intervals_.end() && it->start < e) return &*it;
  return nullptr;
}

SimTime BusyIntervals::busy_time(SimTime from, SimTime to) const {
  SimTime total = 0;
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), from,
                             [](SimTime t, const Interval& iv) { return t < iv.end; });
  for (; it != intervals_.end() && it->start < to; ++it) {
    total += std::min(to, it->end) - std::max(from, it->start);
  }
  return total;
}

BusyIntervals BusyIntervals::merge(const BusyIntervals& a, const std::vector<Interval>& b) {
  std::vector<Interval> all;
  all.reserve(a.intervals_.size() + b.size());
  all.insert(all.end(), a.intervals_.begin(), a.intervals_.end());
  all.insert(all.end(), b.begin(), b.end());
  return BusyIntervals(std::move(all));
}

const Commitment* TaskSchedule::own_overlap(SimTime s, SimTime e) const {
  auto it = commitments_.lower_bound(s);
  if (it != commitments_.begin()) {
    auto prev = std::prev(it);
    if (prev->second.end > s) return &prev->second;
  }
  if (it != commitments_.end() && it->first < e) return &it->second;
  return nullptr;
}

bool TaskSchedule::is_free(Interval w) const {
  if (own_overlap(w.start, w.end) != nullptr) return false;
  return !(preload_ && preload_->first_overlap(w.start, w.end) != nullptr);
}

Reservation TaskSchedule::try_reserve(SimTime now, Interval w, TaskKind kind, double effort) {
  if (w.end <= w.start) throw std::invalid_argument("malformed reservation window");
  if (w.start < now) throw std::invalid_argument("reservation window starts in the past");
  if (!is_free(w)) return Reservation::refused;
  commitments_.emplace(w.start, Commitment{w.start, w.end, kind, effort});
  committed_ += w.length();
  return Reservation::accepted;
}

SimTime TaskSchedule::earliest_free(SimTime from, SimTime duration) const {
  if (duration <= 0) return from;
  SimTime s = from;
  for (;;) {
    if (const Commitment* c = own_overlap(s, s + duration)) {
      s = c->end;
      continue;
    }
    if (preload_) {
      if (const Interval* iv = preload_->first_overlap(s, s + duration)) {
        s = iv->end;
        continue;
      }
    }
    return s;
  }
}

SimTime TaskSchedule::free_slot_before(SimTime from, SimTime duration, SimTime deadline) const {
  const SimTime s = earliest_free(from, duration);
  return s + duration <= deadline ? s : kNever;
}

void TaskSchedule::truncate(SimTime start, SimTime new_end) {
  auto it = commitments_.find(start);
  if (it == commitments_.end()) return;
  if (new_end <= start) {
    committed_ -= it->second.end - it->second.start;
    commitments_.erase(it);
  } else if (new_end < it->second.end) {
    committed_ -= it->second.end - new_end;
    it->second.end = new_end;
  }
}

void TaskSchedule::prune_before(SimTime t) {
  auto it = commitments_.begin();
  while (it != commitments_.end() && it->second.end <= t) {
    if (recording_) history_.push_back(Interval{it->second.start, it->second.end});
    it = commitments_.erase(it);
  }
}

SimTime TaskSchedule::own_busy_time(SimTime from, SimTime to) const {
  SimTime total = 0;
  for (const auto& [s, c] : commitments_) {
    if (c.start >= to) break;
    if (c.end > from) total += std::min(to, c.end) - std::max(from, c.start);
  }
  return total;
}

std::vector<Interval> TaskSchedule::take_history() {
  prune_before(kNever);
  return std::move(history_);
}

}  // namespace lockss
