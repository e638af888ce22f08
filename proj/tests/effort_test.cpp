#include <gtest/gtest.h>

#include "lockss/effort.hpp"

using namespace lockss;

TEST(Efforts, DefaultAuMatchesHandDerivation) {
  const auto s = size_efforts(AuShape{}, EffortParams{});
  const double h = 536870912.0 / 50e6;  // 10.737 s to hash 512 MiB
  EXPECT_NEAR(s.au_hash, h, 1e-9);
  EXPECT_NEAR(s.vote, h + h * 20.0 / 19.0, 1e-9);
  EXPECT_NEAR(s.evaluate_vote, h + h / 19.0, 1e-9);
  EXPECT_NEAR(s.poller_total, (0.01 + s.vote) / 0.95 * 1.1, 1e-9);
  EXPECT_NEAR(s.intro, 0.2 * s.poller_total, 1e-12);
  EXPECT_NEAR(s.intro + s.remaining, s.poller_total, 1e-12);
}

// The requester is always ahead of the supplier at each stage.
TEST(Efforts, StagesStayBalancedAcrossShapes) {
  RngStream rng(1, "shapes");
  for (int i = 0; i < 2000; ++i) {
    const auto blocks = static_cast<std::uint32_t>(1 + rng.below(4096));
    const std::uint64_t bs = 1 + rng.below(8u << 20);
    EffortParams p;
    p.verify_ratio = rng.uniform(2.0, 100.0);
    p.poller_margin = rng.uniform(0.0, 0.5);
    const auto s = size_efforts(AuShape::with_blocks(blocks, bs), p);
    // Poller's first installment covers the voter's cost of checking it.
    ASSERT_GE(s.session + s.intro, s.session + s.verify_intro);
    // Before the vote is produced the poller has spent more than the voter will.
    ASSERT_GE(s.session + s.poller_total, s.voter_cost() * (1 - 1e-12));
    // The vote costs more to build than to evaluate.
    ASSERT_GE(s.vote, s.evaluate_vote);
    // Each block proof pays for hashing its block and verifying the proof.
    ASSERT_GE(s.block_proof * (1 + 1e-12), s.block_hash + s.block_proof / p.verify_ratio);
  }
}

TEST(Efforts, GrowWithAuSize) {
  EffortParams p;
  double prev = -1;
  for (std::uint32_t blocks = 1; blocks <= 2048; blocks *= 2) {
    const auto s = size_efforts(AuShape::with_blocks(blocks), p);
    EXPECT_GT(s.vote, prev);
    prev = s.vote;
  }
}

TEST(Efforts, ZeroSizeAuCollapsesToSession) {
  EffortParams p;
  const auto s = size_efforts(AuShape{0, 0, 0}, p);
  EXPECT_EQ(s.vote, 0);
  EXPECT_EQ(s.evaluate_vote, 0);
  EXPECT_DOUBLE_EQ(s.poller_total, p.session_cost);
}

TEST(Efforts, DurationConvertsAtComputeRate) {
  EffortParams p;
  p.compute_rate = 2.0;
  const auto s = size_efforts(AuShape{}, p);
  EXPECT_EQ(s.duration(10.0), 5 * kSecond);
  EXPECT_EQ(s.duration(0.0), 0);
  EXPECT_EQ(s.duration(1e-9), 1);
}

TEST(Proofs, VerifyChecksNonceCostAndValidity) {
  const ProofMint mint(99);
  const auto p = mint.construct(5, 3.0);
  EXPECT_TRUE(ProofMint::verify(p, 3.0, 5));
  EXPECT_FALSE(ProofMint::verify(p, 3.0, 6));
  EXPECT_FALSE(ProofMint::verify(p, 3.5, 5));
  EXPECT_FALSE(ProofMint::verify(ProofMint::garbage(5), 0.0, 5));
}

TEST(Receipts, HonestEvaluationMatches) {
  const ProofMint mint(1234);
  RngStream rng(2, "receipts");
  for (int i = 0; i < 1000; ++i) {
    const auto nonce = rng.next();
    ASSERT_TRUE(check_receipt(mint.receipt(nonce, 512), mint.receipt(nonce, 512)));
  }
}

TEST(Receipts, PartialEvaluationOrGuessingFails) {
  const ProofMint mint(1234), other(4321);
  RngStream rng(3, "forgery");
  for (int i = 0; i < 1000; ++i) {
    const auto nonce = rng.next();
    const auto remembered = mint.receipt(nonce, 512);
    ASSERT_FALSE(check_receipt(remembered, mint.receipt(nonce, 256)));
    ASSERT_FALSE(check_receipt(remembered, rng.next()));
    ASSERT_FALSE(check_receipt(remembered, other.receipt(nonce, 512)));
    ASSERT_FALSE(check_receipt(remembered, mint.receipt(nonce + 1, 512)));
  }
}

TEST(EffortLedger, SumsByKind) {
  EffortLedger a, b;
  a.spend(EffortKind::hash, 2);
  a.spend(EffortKind::verify, -1);
  b.spend(EffortKind::construct, 3);
  b.impose(4);
  a += b;
  EXPECT_DOUBLE_EQ(a.total(), 5);
  EXPECT_DOUBLE_EQ(a.spent(EffortKind::verify), 0);
  EXPECT_DOUBLE_EQ(a.imposed(), 4);
}
