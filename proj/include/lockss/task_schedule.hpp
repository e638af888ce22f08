#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "lockss/types.hpp"

namespace lockss {

// Sorted, pairwise-disjoint busy intervals. Used for schedule occupancy
// recorded by earlier simulation layers.
class BusyIntervals {
 public:
  BusyIntervals() = default;
  explicit BusyIntervals(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  // First interval overlapping [s, e), or nullptr.
  const Interval* first_overlap(SimTime s, SimTime e) const;
  SimTime busy_time(SimTime from, SimTime to) const;

  // Union with another set; adjacent intervals are coalesced.
  static BusyIntervals merge(const BusyIntervals& a, const std::vector<Interval>& b);

 private:
  std::vector<Interval> intervals_;
};

enum class TaskKind : std::uint8_t { construct_effort, verify_effort, vote, evaluate, repair, other };

struct Commitment {
  SimTime start = 0;
  SimTime end = 0;
  TaskKind kind = TaskKind::other;
  double effort = 0.0;
};

enum class Reservation : std::uint8_t { accepted, refused };

// A peer's exclusive compute-time commitments. Intervals are half-open, so
// back-to-back tasks never conflict.
class TaskSchedule {
 public:
  TaskSchedule() = default;

  void set_preload(std::shared_ptr<const BusyIntervals> preload) { preload_ = std::move(preload); }
  void set_recording(bool on) { recording_ = on; }

  // Throws std::invalid_argument on an empty/inverted window or one that
  // starts before `now`.
  Reservation try_reserve(SimTime now, Interval window, TaskKind kind, double effort);

  bool is_free(Interval window) const;

  // Earliest start >= from such that [start, start + duration) is free.
  SimTime earliest_free(SimTime from, SimTime duration) const;

  // Earliest free slot of `duration` fully inside [from, deadline), or kNever.
  SimTime free_slot_before(SimTime from, SimTime duration, SimTime deadline) const;

  // Shortens (or removes, if new_end <= start) the commitment starting at `start`.
  void truncate(SimTime start, SimTime new_end);

  // Forgets commitments that ended at or before t; recorded history is kept.
  void prune_before(SimTime t);

  std::size_t size() const { return commitments_.size(); }
  const std::map<SimTime, Commitment>& commitments() const { return commitments_; }

  // Busy time from this layer's own commitments in [from, to).
  SimTime own_busy_time(SimTime from, SimTime to) const;

  // Total length of every commitment ever accepted, net of truncation.
  SimTime committed_time() const { return committed_; }
  const BusyIntervals* preload() const { return preload_.get(); }

  // Every interval ever committed (after truncation), when recording is on.
  std::vector<Interval> take_history();

 private:
  const Commitment* own_overlap(SimTime s, SimTime e) const;

  std::map<SimTime, Commitment> commitments_;
  std::shared_ptr<const BusyIntervals> preload_;
  std::vector<Interval> history_;
  SimTime committed_ = 0;
  bool recording_ = false;
};

}  // namespace lockss
