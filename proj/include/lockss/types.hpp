#pragma once

#include <compare>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace lockss {

// Virtual time in integer milliseconds since simulation start.
using SimTime = std::int64_t;

inline constexpr SimTime kMillisecond = 1;
inline constexpr SimTime kSecond = 1000 * kMillisecond;
inline constexpr SimTime kMinute = 60 * kSecond;
inline constexpr SimTime kHour = 60 * kMinute;
inline constexpr SimTime kDay = 86400 * kSecond;
inline constexpr SimTime kMonth = 30 * kDay;
inline constexpr SimTime kYear = 365 * kDay;
inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

inline SimTime from_seconds(double s) { return static_cast<SimTime>(std::llround(s * 1000.0)); }
inline SimTime from_days(double d) { return static_cast<SimTime>(std::llround(d * static_cast<double>(kDay))); }
inline double to_seconds(SimTime t) { return static_cast<double>(t) / 1000.0; }
inline double to_days(SimTime t) { return static_cast<double>(t) / static_cast<double>(kDay); }
inline double to_years(SimTime t) { return static_cast<double>(t) / static_cast<double>(kYear); }

// Strongly typed opaque identifier.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

using PeerId = Id<struct PeerTag>;
using AuId = Id<struct AuTag>;

// Half-open interval [start, end).
struct Interval {
  SimTime start = 0;
  SimTime end = 0;

  SimTime length() const { return end - start; }
  bool overlaps(SimTime s, SimTime e) const { return start < e && s < end; }
  bool contains(SimTime t) const { return start <= t && t < end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace lockss

template <class Tag>
struct std::hash<lockss::Id<Tag>> {
  std::size_t operator()(lockss::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
