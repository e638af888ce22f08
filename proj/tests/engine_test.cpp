#include <gtest/gtest.h>

#include <set>

#include "lockss/event_queue.hpp"
#include "lockss/rng.hpp"

using namespace lockss;

TEST(EventQueue, DispatchesByTimeThenInsertionOrder) {
  EventQueue<int> q;
  q.schedule(30, 1);
  q.schedule(10, 2);
  q.schedule(30, 3);
  q.schedule(10, 4);
  std::vector<int> seen;
  std::vector<SimTime> times;
  q.run_until(100, [&](int v) {
    seen.push_back(v);
    times.push_back(q.now());
  });
  EXPECT_EQ(seen, (std::vector<int>{2, 4, 1, 3}));
  EXPECT_EQ(times, (std::vector<SimTime>{10, 10, 30, 30}));
  EXPECT_EQ(q.now(), 100);
}

TEST(EventQueue, RejectsPastEvents) {
  EventQueue<int> q;
  q.schedule(50, 0);
  q.run_until(60, [](int) {});
  EXPECT_THROW(q.schedule(59, 1), std::logic_error);
  EXPECT_NO_THROW(q.schedule(60, 1));
}

TEST(EventQueue, LeavesLaterEventsPending) {
  EventQueue<int> q;
  q.schedule(5, 1);
  q.schedule(15, 2);
  int n = 0;
  q.run_until(10, [&](int) { ++n; });
  EXPECT_EQ(n, 1);
  EXPECT_EQ(q.pending(), 1u);
}

TEST(EventQueue, CancelledEventsNeverFire) {
  EventQueue<int> q;
  auto h = q.schedule(5, 1);
  q.schedule(6, 2);
  q.cancel(h);
  std::vector<int> seen;
  q.run_until(10, [&](int v) { seen.push_back(v); });
  EXPECT_EQ(seen, std::vector<int>{2});
}

TEST(EventQueue, EventsScheduledDuringDispatchAtSameTimeRunAfter) {
  EventQueue<int> q;
  std::vector<int> seen;
  q.schedule(1, 1);
  q.schedule(1, 2);
  q.run_until(5, [&](int v) {
    seen.push_back(v);
    if (v == 1) q.schedule(q.now(), 3);
  });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
}

TEST(EventQueue, TraceDigestIsReproducible) {
  auto run = [] {
    EventQueue<int> q;
    RngStream rng(7, "t");
    for (int i = 0; i < 1000; ++i) q.schedule(static_cast<SimTime>(rng.below(10000)), i);
    q.run_until(20000, [](int) {});
    return q.trace_digest();
  };
  EXPECT_EQ(run(), run());
}

TEST(EventQueue, ClosureEngineRuns) {
  Engine e;
  int x = 0;
  e.schedule(3, [&] { x += 1; });
  e.schedule(1, [&] { x *= 10; });
  e.run_until(10);
  EXPECT_EQ(x, 1);
}

TEST(Rng, StreamsAreLabelledAndReproducible) {
  RngStream a(42, "poll/1"), b(42, "poll/1"), c(42, "poll/2"), d(43, "poll/1");
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
}

TEST(Rng, UniformTimeStaysInRange) {
  RngStream r(1, "u");
  for (int i = 0; i < 10000; ++i) {
    const SimTime t = r.uniform_time(100, 200);
    ASSERT_GE(t, 100);
    ASSERT_LT(t, 200);
  }
  EXPECT_EQ(r.uniform_time(5, 5), 5);
}

TEST(Rng, SampleDrawsDistinctElements) {
  RngStream r(3, "s");
  std::vector<int> pool(50);
  for (int i = 0; i < 50; ++i) pool[i] = i;
  for (int trial = 0; trial < 1000; ++trial) {
    auto s = r.sample(std::span<const int>(pool), 20);
    ASSERT_EQ(s.size(), 20u);
    std::set<int> u(s.begin(), s.end());
    ASSERT_EQ(u.size(), 20u);
  }
  EXPECT_EQ(r.sample(std::span<const int>(pool), 80).size(), 50u);
}

TEST(Rng, ExponentialMeanMatchesRate) {
  RngStream r(9, "e");
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.exponential(4.0);
  EXPECT_NEAR(sum / n, 0.25, 0.005);
}
