#include <gtest/gtest.h>

#include <cmath>

#include "lockss/metrics.hpp"

using namespace lockss;

TEST(AccessFailure, FromIntervals) {
  // Two replicas over 100 ms; one is damaged for 30 ms, with overlapping records.
  const std::vector<std::vector<Interval>> dmg{{{10, 30}, {20, 40}}, {}};
  EXPECT_DOUBLE_EQ(access_failure(dmg, 100), 30.0 / 200.0);
  const std::vector<std::vector<Interval>> clipped{{{-10, 10}, {90, 200}}};
  EXPECT_DOUBLE_EQ(access_failure(clipped, 100), 20.0 / 100.0);
  EXPECT_EQ(access_failure(std::vector<std::vector<Interval>>{}, 100), 0.0);
}

TEST(AccessFailure, FromTrace) {
  RunTrace t;
  t.peers = 4;
  t.aus = 5;
  t.horizon = 1000;
  t.damaged_time = 2000;
  EXPECT_DOUBLE_EQ(access_failure(t), 0.1);
}

namespace {
RunTrace trace_with(std::uint64_t successes, double loyal) {
  RunTrace t;
  t.peers = 10;
  t.aus = 2;
  t.horizon = 100 * kDay;
  t.successful_polls = successes;
  t.loyal.spend(EffortKind::hash, loyal);
  return t;
}
}  // namespace

TEST(Ratios, SelfComparisonIsOne) {
  const auto t = trace_with(40, 123.0);
  EXPECT_DOUBLE_EQ(delay_ratio(t, t), 1.0);
  EXPECT_DOUBLE_EQ(friction(t, t), 1.0);
}

TEST(Ratios, HalfTheSuccessesDoublesDelay) {
  const auto base = trace_with(40, 100.0);
  const auto slow = trace_with(20, 100.0);
  EXPECT_DOUBLE_EQ(delay_ratio(slow, base), 2.0);
  EXPECT_DOUBLE_EQ(friction(slow, base), 2.0);
  EXPECT_DOUBLE_EQ(mean_success_gap(base), 20 * 100.0 / 40);
}

TEST(Ratios, EdgeCases) {
  const auto base = trace_with(40, 100.0);
  const auto none = trace_with(0, 100.0);
  EXPECT_TRUE(std::isinf(delay_ratio(none, base)));
  EXPECT_TRUE(std::isnan(delay_ratio(base, none)));
  RunTrace a = base;
  EXPECT_TRUE(std::isnan(cost_ratio(a)));
  a.adversary_effortful = true;
  a.adversary.spend(EffortKind::construct, 50.0);
  EXPECT_DOUBLE_EQ(cost_ratio(a), 0.5);
}

TEST(Layers, MeansRatiosAndSumsCounts) {
  MetricsRow a, b;
  a.access_failure = 0.1;
  b.access_failure = 0.3;
  a.successful_polls = 5;
  b.successful_polls = 7;
  a.friction = 1;
  b.friction = 2;
  const MetricsRow rows[] = {a, b};
  const auto c = combine_layers(rows);
  EXPECT_DOUBLE_EQ(c.access_failure, 0.2);
  EXPECT_DOUBLE_EQ(c.friction, 1.5);
  EXPECT_DOUBLE_EQ(c.successful_polls, 12);
}

TEST(Summary, MeanMinMax) {
  MetricsRow a, b;
  a.access_failure = 1;
  b.access_failure = 3;
  const MetricsRow rows[] = {a, b};
  const auto s = summarize(rows);
  EXPECT_DOUBLE_EQ(s.mean.access_failure, 2);
  EXPECT_DOUBLE_EQ(s.min.access_failure, 1);
  EXPECT_DOUBLE_EQ(s.max.access_failure, 3);
}

TEST(Spearman, RankCorrelation) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{2, 4, 8, 16, 1000};
  const std::vector<double> down{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(spearman(x, up), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, down), -1.0);
  // Ties take the average rank; Pearson over ranks (1,2,3.5,3.5,5) vs (1..5).
  const std::vector<double> tied{1, 2, 3, 3, 5};
  const double expect = 9.5 / std::sqrt(10.0 * 9.5);
  EXPECT_NEAR(spearman(x, tied), expect, 1e-12);
  EXPECT_TRUE(std::isnan(spearman(x, std::vector<double>{1, 1, 1, 1, 1})));
}

TEST(Ratios, PerReplicaGapsAreAveraged) {
  RunTrace base, attack;
  for (RunTrace* t : {&base, &attack}) {
    t->peers = 2;
    t->aus = 1;
    t->horizon = 730 * kDay;
  }
  base.replica_successes = {8, 8};
  base.successful_polls = 16;
  attack.replica_successes = {4, 4};
  attack.successful_polls = 8;
  EXPECT_DOUBLE_EQ(delay_ratio(attack, base), 2.0);
  // A replica that never succeeds counts as a full horizon.
  attack.replica_successes = {8, 0};
  attack.successful_polls = 8;
  EXPECT_DOUBLE_EQ(mean_success_gap(attack), (730.0 / 8 + 730.0) / 2);
  EXPECT_DOUBLE_EQ(delay_ratio(attack, base), (730.0 / 8 + 730.0) / 2 / (730.0 / 8));
}
