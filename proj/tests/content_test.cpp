#include <gtest/gtest.h>

#include <cmath>

#include "lockss/content.hpp"

using namespace lockss;

TEST(DamageProcess, RateSpreadsDiskMtbfOverAus) {
  DamageProcess d(5.0, 50.0);
  EXPECT_DOUBLE_EQ(d.rate_per_au_year(), 1.0 / 250.0);
  EXPECT_FALSE(DamageProcess(0.0, 50.0).enabled());
  EXPECT_FALSE(DamageProcess(INFINITY, 50.0).enabled());
  RngStream rng(1, "d");
  EXPECT_EQ(DamageProcess(0.0, 50.0).next_gap(rng), kNever);
}

// Counts over a fixed window follow Poisson(rate * window): check mean and variance.
TEST(DamageProcess, EventCountsArePoisson) {
  DamageProcess d(1.0, 1.0);  // one event per year
  RngStream rng(2, "poisson");
  const int trials = 20000;
  const SimTime window = 3 * kYear;
  double sum = 0, sq = 0;
  for (int i = 0; i < trials; ++i) {
    int n = 0;
    for (SimTime t = d.next_gap(rng); t < window; t += d.next_gap(rng)) ++n;
    sum += n;
    sq += double(n) * n;
  }
  const double mean = sum / trials;
  const double var = sq / trials - mean * mean;
  EXPECT_NEAR(mean, 3.0, 0.06);
  EXPECT_NEAR(var, 3.0, 0.15);
}

TEST(Replica, DamagedTimeTracksWholeReplicaState) {
  Replica r(PeerId{0}, AuId{0}, 8);
  EXPECT_TRUE(r.read_ok());
  EXPECT_TRUE(r.set_damage(3, 1, 100));
  EXPECT_FALSE(r.set_damage(3, 2, 110));
  EXPECT_TRUE(r.set_damage(5, 3, 150));
  EXPECT_FALSE(r.read_ok());
  EXPECT_TRUE(r.apply_repair(3, 0, 200));
  EXPECT_FALSE(r.read_ok());  // one block still bad
  EXPECT_EQ(r.damaged_time(250), 150);
  EXPECT_TRUE(r.apply_repair(5, 0, 300));
  EXPECT_TRUE(r.read_ok());
  EXPECT_EQ(r.damaged_time(1000), 200);
  EXPECT_FALSE(r.apply_repair(5, 0, 400));
  ASSERT_EQ(r.log().size(), 2u);
  EXPECT_EQ(r.log()[0].repaired_at, 200);
  EXPECT_EQ(r.log()[1].repaired_at, 300);
}

TEST(Replica, RepairFromDamagedSourceSpreadsDamage) {
  Replica r(PeerId{0}, AuId{0}, 4);
  EXPECT_TRUE(r.apply_repair(2, 7, 10));
  EXPECT_EQ(r.state(2), 7u);
  EXPECT_FALSE(r.read_ok());
}

// Random set/repair sequences against a per-millisecond oracle of the replica state.
TEST(Replica, DamagedTimeMatchesOracle) {
  RngStream rng(3, "replica");
  for (int trial = 0; trial < 1000; ++trial) {
    Replica r(PeerId{0}, AuId{0}, 6);
    std::vector<DamageId> state(6, 0);
    SimTime t = 0, expect = 0;
    for (int op = 0; op < 30; ++op) {
      const SimTime dt = rng.uniform_time(0, 20);
      bool any = false;
      for (auto s : state) any = any || s != 0;
      if (any) expect += dt;
      t += dt;
      const auto b = static_cast<std::uint32_t>(rng.below(6));
      if (rng.bernoulli(0.5)) {
        if (state[b] == 0) state[b] = static_cast<DamageId>(op + 1);
        r.set_damage(b, static_cast<DamageId>(op + 1), t);
      } else {
        r.apply_repair(b, 0, t);
        state[b] = 0;
      }
      for (std::uint32_t i = 0; i < 6; ++i) ASSERT_EQ(r.state(i), state[i]);
    }
    ASSERT_EQ(r.damaged_time(t), expect);
  }
}

TEST(Content, DigestsSeparateStatesAndNonces) {
  const AuId au{4};
  EXPECT_EQ(block_digest(au, 1, 9, 0), block_digest(au, 1, 9, 0));
  EXPECT_NE(block_digest(au, 1, 9, 0), block_digest(au, 1, 9, 1));
  EXPECT_NE(block_digest(au, 1, 9, 1), block_digest(au, 1, 9, 2));
  EXPECT_NE(block_digest(au, 1, 9, 0), block_digest(au, 1, 10, 0));
  EXPECT_NE(block_digest(au, 1, 9, 0), block_digest(au, 2, 9, 0));
}

TEST(Content, InjectPicksUndamagedBlocks) {
  DamageProcess d(1.0, 1.0);
  RngStream rng(4, "inject");
  Replica r(PeerId{0}, AuId{0}, 5);
  for (int i = 0; i < 5; ++i) ASSERT_TRUE(d.inject(r, i, rng).has_value());
  EXPECT_EQ(r.damaged_blocks(), 5u);
  EXPECT_FALSE(d.inject(r, 6, rng).has_value());
  const auto v = hash_vote(r, 77);
  ASSERT_EQ(v.size(), 5u);
  for (std::uint32_t b = 0; b < 5; ++b) EXPECT_NE(v[b], block_digest(AuId{0}, b, 77, 0));
}
