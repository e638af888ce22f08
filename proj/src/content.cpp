#include "lockss/content.hpp"

#include <algorithm>
#include <cmath>

namespace lockss {

std::uint64_t block_digest(AuId au, std::uint32_t block, std::uint64_t nonce, DamageId state) {
  std::uint64_t h = mix(0x6c6f636b7373ull ^ au.value, block);
  h = mix(h, nonce);
  return mix(h, state);
}

DamageId damage_at(const DamageSnapshot& snap, std::uint32_t block) {
  auto it = std::lower_bound(snap.begin(), snap.end(), block,
                             [](const DamagedBlock& d, std::uint32_t b) { return d.block < b; });
  return it != snap.end() && it->block == block ? it->id : 0;
}

void Replica::note_transition(bool was_damaged, SimTime now) {
  if (!was_damaged && damaged()) {
    damaged_since_ = now;
  } else if (was_damaged && !damaged()) {
    damaged_total_ += now - damaged_since_;
    damaged_since_ = kNever;
  }
}

bool Replica::set_damage(std::uint32_t block, DamageId id, SimTime now) {
  auto it = std::lower_bound(damaged_.begin(), damaged_.end(), block,
                             [](const DamagedBlock& d, std::uint32_t b) { return d.block < b; });
  if (it != damaged_.end() && it->block == block) return false;
  const bool was = damaged();
  damaged_.insert(it, DamagedBlock{block, id});
  log_.push_back(DamageRecord{block, now, kNever});
  note_transition(was, now);
  return true;
}

bool Replica::apply_repair(std::uint32_t block, DamageId source_state, SimTime now) {
  auto it = std::lower_bound(damaged_.begin(), damaged_.end(), block,
                             [](const DamagedBlock& d, std::uint32_t b) { return d.block < b; });
  const DamageId cur = (it != damaged_.end() && it->block == block) ? it->id : 0;
  if (cur == source_state) return false;
  const bool was = damaged();
  if (cur != 0 && source_state == 0) {
    damaged_.erase(it);
    for (auto r = log_.rbegin(); r != log_.rend(); ++r) {
      if (r->block == block && r->repaired_at == kNever) {
        r->repaired_at = now;
        break;
      }
    }
  } else if (cur != 0) {
    it->id = source_state;
  } else {
    damaged_.insert(it, DamagedBlock{block, source_state});
    log_.push_back(DamageRecord{block, now, kNever});
  }
  note_transition(was, now);
  return true;
}

SimTime Replica::damaged_time(SimTime end) const {
  SimTime total = damaged_total_;
  if (damaged_since_ != kNever && end > damaged_since_) total += end - damaged_since_;
  return total;
}

std::vector<std::uint64_t> hash_vote(const Replica& rep, std::uint64_t nonce) {
  std::vector<std::uint64_t> out(rep.block_count());
  for (std::uint32_t b = 0; b < rep.block_count(); ++b) out[b] = block_digest(rep.au(), b, nonce, rep.state(b));
  return out;
}

DamageProcess::DamageProcess(double mtbf_years, double aus_per_disk) {
  if (mtbf_years > 0.0 && std::isfinite(mtbf_years) && aus_per_disk > 0.0) rate_ = 1.0 / (mtbf_years * aus_per_disk);
}

SimTime DamageProcess::next_gap(RngStream& rng) const {
  if (!enabled()) return kNever;
  const double years = rng.exponential(rate_);
  const double ms = years * static_cast<double>(kYear);
  if (ms >= static_cast<double>(kNever / 2)) return kNever;
  return std::max<SimTime>(1, static_cast<SimTime>(std::llround(ms)));
}

std::optional<std::uint32_t> DamageProcess::inject(Replica& rep, SimTime now, RngStream& rng) {
  ++events_;
  if (rep.damaged_blocks() >= rep.block_count()) return std::nullopt;
  // Rejection sampling is cheap because damaged blocks are rare.
  for (;;) {
    const auto b = static_cast<std::uint32_t>(rng.below(rep.block_count()));
    if (rep.state(b) == 0) {
      rep.set_damage(b, next_id_++, now);
      return b;
    }
  }
}

}  // namespace lockss
