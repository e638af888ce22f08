#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lockss/rng.hpp"
#include "lockss/types.hpp"

namespace lockss {

inline constexpr std::array<double, 3> kLinkBandwidths{1.5e6, 10e6, 100e6};

struct LinkProfile {
  PeerId peer;
  double bandwidth_bps = 10e6;
  SimTime latency = 10 * kMillisecond;
};

// Latency/bandwidth delivery without congestion. Peers with ids beyond the
// drawn population (adversary minions) share one well-provisioned profile.
// Pipe stoppage is tracked per peer as a union of blocked intervals.
class Network {
 public:
  Network() = default;
  Network(std::size_t peers, RngStream& rng);
  explicit Network(std::vector<LinkProfile> links);

  const LinkProfile& link(PeerId p) const;
  std::size_t size() const { return links_.size(); }

  // Delivery time of a message sent now, or nullopt if either endpoint is
  // blocked at send time. Messages already in flight are never recalled.
  std::optional<SimTime> transmit(PeerId src, PeerId dst, std::uint64_t bytes, SimTime now) const;

  // Blocks all traffic to and from `peers` over [start, start + duration).
  // Throws std::invalid_argument if duration <= 0.
  void apply_stoppage(std::span<const PeerId> peers, SimTime start, SimTime duration);

  bool blocked(PeerId p, SimTime t) const;

  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  std::vector<LinkProfile> links_;
  LinkProfile outsider_{PeerId{0}, 100e6, 1 * kMillisecond};
  std::vector<std::vector<Interval>> blocked_;
  mutable std::uint64_t delivered_ = 0;
  mutable std::uint64_t dropped_ = 0;
};

}  // namespace lockss
