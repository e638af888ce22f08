#include <gtest/gtest.h>

#include <memory>

#include "lockss/rng.hpp"
#include "lockss/task_schedule.hpp"

using namespace lockss;

TEST(TaskSchedule, AbuttingIntervalsDoNotConflict) {
  TaskSchedule s;
  EXPECT_EQ(s.try_reserve(0, {10, 20}, TaskKind::vote, 1), Reservation::accepted);
  EXPECT_EQ(s.try_reserve(0, {20, 30}, TaskKind::vote, 1), Reservation::accepted);
  EXPECT_EQ(s.try_reserve(0, {0, 10}, TaskKind::vote, 1), Reservation::accepted);
  EXPECT_EQ(s.try_reserve(0, {19, 21}, TaskKind::vote, 1), Reservation::refused);
  EXPECT_EQ(s.try_reserve(0, {5, 35}, TaskKind::vote, 1), Reservation::refused);
  EXPECT_EQ(s.committed_time(), 30);
}

TEST(TaskSchedule, RejectsMalformedWindows) {
  TaskSchedule s;
  EXPECT_THROW(s.try_reserve(0, {10, 10}, TaskKind::other, 0), std::invalid_argument);
  EXPECT_THROW(s.try_reserve(0, {10, 5}, TaskKind::other, 0), std::invalid_argument);
  EXPECT_THROW(s.try_reserve(11, {10, 20}, TaskKind::other, 0), std::invalid_argument);
}

// Against a bitmap of occupied milliseconds: a reservation succeeds exactly
// when none of its slots are taken.
TEST(TaskSchedule, MatchesSlotBitmapOracle) {
  RngStream rng(11, "schedule-oracle");
  for (int trial = 0; trial < 1000; ++trial) {
    TaskSchedule s;
    std::vector<bool> used(400, false);
    for (int op = 0; op < 40; ++op) {
      const SimTime a = rng.uniform_time(0, 380);
      const SimTime b = a + 1 + rng.uniform_time(0, 20);
      bool free = true;
      for (SimTime t = a; t < b; ++t) free = free && !used[t];
      ASSERT_EQ(s.is_free({a, b}), free);
      const auto r = s.try_reserve(0, {a, b}, TaskKind::other, 0);
      ASSERT_EQ(r == Reservation::accepted, free);
      if (free)
        for (SimTime t = a; t < b; ++t) used[t] = true;
    }
    SimTime busy = 0;
    for (bool u : used) busy += u ? 1 : 0;
    ASSERT_EQ(s.committed_time(), busy);
    ASSERT_EQ(s.own_busy_time(0, 400), busy);
  }
}

TEST(TaskSchedule, EarliestFreeFindsFirstGap) {
  RngStream rng(12, "earliest");
  for (int trial = 0; trial < 1000; ++trial) {
    TaskSchedule s;
    std::vector<bool> used(300, false);
    for (int op = 0; op < 15; ++op) {
      const SimTime a = rng.uniform_time(0, 250);
      const SimTime b = a + 1 + rng.uniform_time(0, 30);
      if (s.try_reserve(0, {a, b}, TaskKind::other, 0) == Reservation::accepted)
        for (SimTime t = a; t < b; ++t) used[t] = true;
    }
    const SimTime from = rng.uniform_time(0, 200);
    const SimTime dur = 1 + rng.uniform_time(0, 15);
    SimTime expect = from;
    for (;; ++expect) {
      bool ok = true;
      for (SimTime t = expect; t < expect + dur; ++t) ok = ok && (t >= 300 || !used[t]);
      if (ok) break;
    }
    ASSERT_EQ(s.earliest_free(from, dur), expect);
    ASSERT_EQ(s.free_slot_before(from, dur, expect + dur), expect);
    ASSERT_EQ(s.free_slot_before(from, dur, expect + dur - 1), kNever);
  }
}

TEST(TaskSchedule, TruncateReleasesTail) {
  TaskSchedule s;
  ASSERT_EQ(s.try_reserve(0, {0, 100}, TaskKind::vote, 1), Reservation::accepted);
  EXPECT_FALSE(s.is_free({60, 70}));
  s.truncate(0, 50);
  EXPECT_TRUE(s.is_free({50, 100}));
  EXPECT_FALSE(s.is_free({49, 50}));
  EXPECT_EQ(s.committed_time(), 50);
  s.truncate(0, 0);
  EXPECT_EQ(s.size(), 0u);
  EXPECT_EQ(s.committed_time(), 0);
}

TEST(TaskSchedule, PreloadBlocksReservations) {
  TaskSchedule s;
  s.set_preload(std::make_shared<BusyIntervals>(std::vector<Interval>{{100, 200}, {150, 250}, {300, 310}}));
  EXPECT_EQ(s.preload()->intervals().size(), 2u);
  EXPECT_EQ(s.try_reserve(0, {240, 260}, TaskKind::other, 0), Reservation::refused);
  EXPECT_EQ(s.try_reserve(0, {250, 300}, TaskKind::other, 0), Reservation::accepted);
  EXPECT_EQ(s.earliest_free(90, 20), 310);
  EXPECT_EQ(s.earliest_free(0, 100), 0);
}

TEST(TaskSchedule, HistoryRecordsPrunedCommitments) {
  TaskSchedule s;
  s.set_recording(true);
  s.try_reserve(0, {0, 10}, TaskKind::other, 0);
  s.try_reserve(0, {20, 30}, TaskKind::other, 0);
  s.prune_before(15);
  EXPECT_EQ(s.size(), 1u);
  const auto h = s.take_history();
  EXPECT_EQ(h, (std::vector<Interval>{{0, 10}, {20, 30}}));
}

TEST(BusyIntervals, MergeCoalescesAndCountsBusyTime) {
  BusyIntervals a(std::vector<Interval>{{0, 10}, {30, 40}});
  auto m = BusyIntervals::merge(a, {{10, 20}, {35, 50}});
  EXPECT_EQ(m.intervals(), (std::vector<Interval>{{0, 20}, {30, 50}}));
  EXPECT_EQ(m.busy_time(5, 45), 15 + 15);
}
