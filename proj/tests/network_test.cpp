#include <gtest/gtest.h>

#include "lockss/network.hpp"

using namespace lockss;

namespace {
Network two_peers(double bw_a, double bw_b) {
  return Network({LinkProfile{PeerId{0}, bw_a, 10 * kMillisecond}, LinkProfile{PeerId{1}, bw_b, 10 * kMillisecond}});
}
}  // namespace

TEST(Network, DeliveryUsesSlowerLinkAndBothLatencies) {
  const Network n = two_peers(1.5e6, 100e6);
  // 8e6 bits over 1.5 Mbps is 5.333 s, plus 10 ms at each end.
  const auto t = n.transmit(PeerId{0}, PeerId{1}, 1'000'000, 1000);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(*t, 1000 + 5353);
}

TEST(Network, SmallMessagesCostLatencyOnly) {
  const Network n = two_peers(100e6, 100e6);
  EXPECT_EQ(*n.transmit(PeerId{1}, PeerId{0}, 0, 0), 20);
}

TEST(Network, StoppageDropsTrafficBothWays) {
  Network n = two_peers(10e6, 10e6);
  const PeerId victim{1};
  n.apply_stoppage(std::span<const PeerId>(&victim, 1), 100, 50);
  EXPECT_TRUE(n.transmit(PeerId{0}, victim, 10, 99).has_value());
  EXPECT_FALSE(n.transmit(PeerId{0}, victim, 10, 100).has_value());
  EXPECT_FALSE(n.transmit(victim, PeerId{0}, 10, 149).has_value());
  EXPECT_TRUE(n.transmit(victim, PeerId{0}, 10, 150).has_value());
  EXPECT_EQ(n.dropped(), 2u);
  EXPECT_EQ(n.delivered(), 2u);
  EXPECT_THROW(n.apply_stoppage(std::span<const PeerId>(&victim, 1), 0, 0), std::invalid_argument);
}

TEST(Network, OverlappingStoppagesMerge) {
  Network n = two_peers(10e6, 10e6);
  const PeerId p{0};
  n.apply_stoppage(std::span<const PeerId>(&p, 1), 0, 10);
  n.apply_stoppage(std::span<const PeerId>(&p, 1), 5, 20);
  for (SimTime t = 0; t < 25; ++t) EXPECT_TRUE(n.blocked(p, t));
  EXPECT_FALSE(n.blocked(p, 25));
}

TEST(Network, DrawnProfilesUseListedBandwidths) {
  RngStream rng(5, "network");
  Network n(500, rng);
  for (std::uint32_t i = 0; i < 500; ++i) {
    const auto& l = n.link(PeerId{i});
    EXPECT_TRUE(l.bandwidth_bps == 1.5e6 || l.bandwidth_bps == 10e6 || l.bandwidth_bps == 100e6);
    EXPECT_GE(l.latency, 1);
    EXPECT_LE(l.latency, 30);
  }
  // Peers outside the population are never blocked and always reachable.
  EXPECT_FALSE(n.blocked(PeerId{10'000}, 0));
}
