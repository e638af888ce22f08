#pragma once

#include <vector>

#include "lockss/config.hpp"
#include "lockss/rng.hpp"
#include "lockss/types.hpp"

namespace lockss {

// Attack windows repeat from time zero: `attack_days` on, then the
// recuperation gap, until the horizon. Zero-length attacks yield none.
std::vector<Interval> attack_windows(const AdversaryConfig& cfg, SimTime horizon);

// Number of loyal peers a window targets.
std::uint32_t targeted_count(const AdversaryConfig& cfg, std::uint32_t peers);

// Arrival time of the next flood invitation that survives the random drop.
// Invitations arriving during refractory are rejected outright, so the
// earliest useful one comes after `refractory_end`; the survivors of a
// Poisson stream with `rate_per_day` thinned by `admit_prob` are again Poisson.
SimTime next_admitted_garbage(SimTime now, SimTime refractory_end, double rate_per_day, double admit_prob,
                              RngStream& rng);

}  // namespace lockss
