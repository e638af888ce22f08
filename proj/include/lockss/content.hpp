#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lockss/rng.hpp"
#include "lockss/types.hpp"

namespace lockss {

struct AuShape {
  std::uint64_t size_bytes = 512ull << 20;
  std::uint32_t block_count = 512;
  std::uint64_t block_size = 1ull << 20;

  bool valid() const { return block_count >= 1 && block_size * block_count == size_bytes; }
  static AuShape with_blocks(std::uint32_t blocks, std::uint64_t block_size = 1ull << 20) {
    return AuShape{block_size * blocks, blocks, block_size};
  }
};

// Damage id 0 is the correct content; anything else identifies one damage
// event, so independently damaged copies of a block disagree with each other.
using DamageId = std::uint32_t;

struct DamagedBlock {
  std::uint32_t block = 0;
  DamageId id = 0;
  friend bool operator==(const DamagedBlock&, const DamagedBlock&) = default;
};

// Sorted by block index. Small in practice: damage is rare.
using DamageSnapshot = std::vector<DamagedBlock>;

std::uint64_t block_digest(AuId au, std::uint32_t block, std::uint64_t nonce, DamageId state);

DamageId damage_at(const DamageSnapshot& snap, std::uint32_t block);

struct DamageRecord {
  std::uint32_t block = 0;
  SimTime damaged_at = 0;
  SimTime repaired_at = kNever;  // kNever while pending
};

class Replica {
 public:
  Replica() = default;
  Replica(PeerId owner, AuId au, std::uint32_t block_count) : owner_(owner), au_(au), block_count_(block_count) {}

  PeerId owner() const { return owner_; }
  AuId au() const { return au_; }
  std::uint32_t block_count() const { return block_count_; }

  bool damaged() const { return !damaged_.empty(); }
  std::size_t damaged_blocks() const { return damaged_.size(); }
  DamageId state(std::uint32_t block) const { return damage_at(damaged_, block); }
  const DamageSnapshot& snapshot() const { return damaged_; }

  // Flags `block` with a fresh damage id. Returns false (no-op) if the
  // block is already damaged.
  bool set_damage(std::uint32_t block, DamageId id, SimTime now);

  // Overwrites `block` with the content held by a repair source. Returns true
  // if the block changed.
  bool apply_repair(std::uint32_t block, DamageId source_state, SimTime now);

  // Whole-replica access criterion.
  bool read_ok() const { return damaged_.empty(); }

  // Total time this replica spent with at least one damaged block in [0, end).
  SimTime damaged_time(SimTime end) const;

  const std::vector<DamageRecord>& log() const { return log_; }

 private:
  void note_transition(bool was_damaged, SimTime now);

  PeerId owner_{0};
  AuId au_{0};
  std::uint32_t block_count_ = 0;
  DamageSnapshot damaged_;
  std::vector<DamageRecord> log_;
  SimTime damaged_since_ = kNever;
  SimTime damaged_total_ = 0;
};

// Digest list a voter would send: one running-hash digest per block.
std::vector<std::uint64_t> hash_vote(const Replica& rep, std::uint64_t nonce);

// Memoryless block damage. `mtbf_years` is per disk; the disk's damage rate
// is spread evenly over `aus_per_disk` AUs. mtbf_years <= 0 or infinite
// disables damage.
class DamageProcess {
 public:
  DamageProcess() = default;
  DamageProcess(double mtbf_years, double aus_per_disk);

  double rate_per_au_year() const { return rate_; }
  bool enabled() const { return rate_ > 0.0; }

  // Time until the next damage event on one replica, or kNever.
  SimTime next_gap(RngStream& rng) const;

  // Damages a block chosen uniformly among the undamaged ones. Returns nullopt
  // (no-op) when every block is already damaged.
  std::optional<std::uint32_t> inject(Replica& rep, SimTime now, RngStream& rng);

  std::uint64_t events() const { return events_; }

 private:
  double rate_ = 0.0;
  DamageId next_id_ = 1;
  std::uint64_t events_ = 0;
};

}  // namespace lockss
