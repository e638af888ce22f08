#include <gtest/gtest.h>

#include <algorithm>

#include "lockss/rng.hpp"
#include "lockss/tally.hpp"

using namespace lockss;

namespace {
// Plain restatement of the landslide rule.
BlockVerdict expected(int agree, int disagree, int quorum, int slack) {
  if (agree + disagree < quorum) return BlockVerdict::inquorate;
  if (disagree <= slack) return BlockVerdict::agree;
  if (agree <= slack) return BlockVerdict::disagree;
  return BlockVerdict::inconclusive;
}
}  // namespace

TEST(Tally, TenVotesTruthTable) {
  const BlockVerdict table[11] = {
      BlockVerdict::agree,        BlockVerdict::agree,        BlockVerdict::agree,        BlockVerdict::agree,
      BlockVerdict::inconclusive, BlockVerdict::inconclusive, BlockVerdict::inconclusive, BlockVerdict::disagree,
      BlockVerdict::disagree,     BlockVerdict::disagree,     BlockVerdict::disagree,
  };
  const std::uint64_t own = 1;
  for (int bad = 0; bad <= 10; ++bad) {
    std::vector<std::uint64_t> v(10, own);
    for (int i = 0; i < bad; ++i) v[i] = 100 + i;
    const auto t = tally_block(v, own, 10, 3);
    EXPECT_EQ(t.verdict, table[bad]) << bad;
    EXPECT_EQ(t.disagreeing, static_cast<std::uint32_t>(bad));
  }
}

TEST(Tally, TooFewVotesIsInquorate) {
  std::vector<std::uint64_t> v(9, 5);
  EXPECT_EQ(tally_block(v, 5, 10, 3).verdict, BlockVerdict::inquorate);
}

TEST(Tally, MatchesOracleAndIgnoresVoteOrder) {
  RngStream rng(1, "tally");
  for (int trial = 0; trial < 5000; ++trial) {
    const int n = static_cast<int>(rng.below(25));
    const int quorum = 1 + static_cast<int>(rng.below(15));
    const int slack = static_cast<int>(rng.below(6));
    std::vector<std::uint64_t> votes(n), expect(n);
    int agree = 0;
    for (int i = 0; i < n; ++i) {
      expect[i] = rng.next();
      const bool ok = rng.bernoulli(0.7);
      votes[i] = ok ? expect[i] : expect[i] ^ 1;
      agree += ok;
    }
    const auto t = tally_block(votes, expect, quorum, slack);
    ASSERT_EQ(t.verdict, expected(agree, n - agree, quorum, slack));
    ASSERT_EQ(t.agreeing, static_cast<std::uint32_t>(agree));
    // Shuffle pairs together: the verdict must not change.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    rng.shuffle(idx);
    std::vector<std::uint64_t> v2(n), e2(n);
    for (int i = 0; i < n; ++i) {
      v2[i] = votes[idx[i]];
      e2[i] = expect[idx[i]];
    }
    ASSERT_EQ(tally_block(v2, e2, quorum, slack).verdict, t.verdict);
  }
}
