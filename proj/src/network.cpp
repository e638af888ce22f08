#include "lockss/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lockss {

Network::Network(std::size_t peers, RngStream& rng) {
  links_.reserve(peers);
  for (std::size_t i = 0; i < peers; ++i) {
    LinkProfile lp;
    lp.peer = PeerId{static_cast<std::uint32_t>(i)};
    lp.bandwidth_bps = kLinkBandwidths[rng.below(kLinkBandwidths.size())];
    lp.latency = 1 + static_cast<SimTime>(rng.below(30));  // 1..30 ms
    links_.push_back(lp);
  }
  blocked_.resize(peers);
}

Network::Network(std::vector<LinkProfile> links) : links_(std::move(links)) { blocked_.resize(links_.size()); }

const LinkProfile& Network::link(PeerId p) const {
  return p.value < links_.size() ? links_[p.value] : outsider_;
}

bool Network::blocked(PeerId p, SimTime t) const {
  if (p.value >= blocked_.size()) return false;
  const auto& ivs = blocked_[p.value];
  auto it = std::upper_bound(ivs.begin(), ivs.end(), t, [](SimTime x, const Interval& iv) { return x < iv.end; });
  return it != ivs.end() && it->start <= t;
}

std::optional<SimTime> Network::transmit(PeerId src, PeerId dst, std::uint64_t bytes, SimTime now) const {
  if (blocked(src, now) || blocked(dst, now)) {
    ++dropped_;
    return std::nullopt;
  }
  const LinkProfile& a = link(src);
  const LinkProfile& b = link(dst);
  const double bw = std::min(a.bandwidth_bps, b.bandwidth_bps);
  const double serialize_ms = static_cast<double>(bytes) * 8.0 * 1000.0 / bw;
  ++delivered_;
  return now + a.latency + b.latency + static_cast<SimTime>(std::llround(serialize_ms));
}

void Network::apply_stoppage(std::span<const PeerId> peers, SimTime start, SimTime duration) {
  if (duration <= 0) throw std::invalid_argument("stoppage duration must be positive");
  for (PeerId p : peers) {
    if (p.value >= blocked_.size()) continue;
    auto& ivs = blocked_[p.value];
    ivs.push_back(Interval{start, start + duration});
    std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) { return x.start < y.start; });
    std::vector<Interval> merged;
    for (const Interval& iv : ivs) {
      if (!merged.empty() && iv.start <= merged.back().end) {
        merged.back().end = std::max(merged.back().end, iv.end);
      } else {
        merged.push_back(iv);
      }
    }
    ivs = std::move(merged);
  }
}

}  // namespace lockss
