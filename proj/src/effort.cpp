#include "lockss/effort.hpp"

#include <cmath>

#include "lockss/rng.hpp"

namespace lockss {

SimTime EffortSchedule::duration(double effort) const {
  if (effort <= 0) return 0;
  return std::max<SimTime>(1, from_seconds(effort / compute_rate));
}

EffortSchedule size_efforts(const AuShape& au, const EffortParams& p) {
  EffortSchedule s;
  const double z = p.verify_ratio;
  s.verify_ratio = z;
  s.compute_rate = p.compute_rate;
  s.session = p.session_cost;
  s.au_hash = static_cast<double>(au.size_bytes) / p.hash_bytes_per_sec;
  s.block_hash = au.block_count ? s.au_hash / au.block_count : 0.0;
  // Proof c per block must pay for the poller hashing that block and checking
  // the proof: c >= block_hash + c / z.
  s.block_proof = s.block_hash * z / (z - 1.0);
  s.vote = s.au_hash + au.block_count * s.block_proof;
  s.evaluate_vote = s.au_hash + au.block_count * s.block_proof / z;
  // Poller total P must cover session + P / z (verifying both parts) + vote.
  const double bare = (s.session + s.vote) / (1.0 - 1.0 / z);
  s.poller_total = s.vote > 0 ? bare * (1.0 + p.poller_margin) : s.session;
  s.intro = s.poller_total * p.intro_share;
  s.remaining = s.poller_total - s.intro;
  s.verify_intro = s.intro / z;
  s.verify_remaining = s.remaining / z;
  return s;
}

EffortProof ProofMint::construct(std::uint64_t nonce, double cost) const {
  const auto cost_bits = static_cast<std::uint64_t>(std::llround(cost * 1e6));
  return EffortProof{cost, nonce, true, mix(mix(key_, nonce), cost_bits)};
}

bool ProofMint::verify(const EffortProof& p, double expected_cost, std::uint64_t expected_nonce) {
  return p.valid && p.nonce == expected_nonce && p.cost + 1e-9 >= expected_cost;
}

std::uint64_t ProofMint::block_byproduct(std::uint64_t vote_nonce, std::uint32_t block) const {
  return splitmix64((key_ ^ vote_nonce) + block);
}

// Stands for the fold over per-block byproducts: it depends on the key, so
// only the mint produces it, and on how many blocks were walked, so a partial
// evaluation yields a different value.
std::uint64_t ProofMint::receipt(std::uint64_t vote_nonce, std::uint32_t evaluated_blocks) const {
  return mix(mix(key_, ~vote_nonce), 0x7265636569707400ULL + evaluated_blocks);
}

}  // namespace lockss
