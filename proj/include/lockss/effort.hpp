#pragma once

#include <array>
#include <cstdint>

#include "lockss/content.hpp"
#include "lockss/types.hpp"

namespace lockss {

// Effort units are seconds of reference-PC compute.
struct EffortParams {
  double hash_bytes_per_sec = 50e6;
  double verify_ratio = 20.0;   // construction costs this many times verification
  double session_cost = 0.01;   // stand-in for secure session setup
  double intro_share = 0.2;     // part of the poller's effort sent with the invitation
  double poller_margin = 0.1;   // poller effort above the bare balance requirement
  double compute_rate = 1.0;    // effort units per second of wall time
};

struct EffortSchedule {
  double au_hash = 0;           // hashing one whole replica
  double block_hash = 0;
  double block_proof = 0;       // per-block proof carried in a vote
  double vote = 0;              // voter: hash replica + construct all per-block proofs
  double poller_total = 0;      // intro + remaining
  double intro = 0;
  double remaining = 0;
  double verify_intro = 0;
  double verify_remaining = 0;
  double evaluate_vote = 0;     // poller: hash own replica + verify per-block proofs
  double session = 0;
  double verify_ratio = 1;
  double compute_rate = 1;

  // Cost a loyal voter carries for one accepted invitation.
  double voter_cost() const { return session + verify_intro + verify_remaining + vote; }

  SimTime duration(double effort) const;
};

// Sizes every stage so the requester always has more invested than the
// supplier. A zero-size AU collapses to the session constant.
EffortSchedule size_efforts(const AuShape& au, const EffortParams& p);

struct EffortProof {
  double cost = 0;
  std::uint64_t nonce = 0;
  bool valid = false;
  std::uint64_t byproduct = 0;
};

// Holds the key that stands in for proof unforgeability: only the mint can
// produce byproducts, so participants can hand them over but never invent them.
class ProofMint {
 public:
  explicit ProofMint(std::uint64_t key) : key_(key) {}

  EffortProof construct(std::uint64_t nonce, double cost) const;
  static EffortProof garbage(std::uint64_t nonce) { return EffortProof{0.0, nonce, false, 0}; }

  static bool verify(const EffortProof& p, double expected_cost, std::uint64_t expected_nonce);

  // Byproduct of verifying the proof attached to one block of a vote.
  std::uint64_t block_byproduct(std::uint64_t vote_nonce, std::uint32_t block) const;

  // Receipt over the byproducts of blocks [0, evaluated_blocks). Only a full
  // evaluation reproduces the voter's remembered value.
  std::uint64_t receipt(std::uint64_t vote_nonce, std::uint32_t evaluated_blocks) const;

 private:
  std::uint64_t key_;
};

inline bool check_receipt(std::uint64_t remembered, std::uint64_t received) { return remembered == received; }

enum class EffortKind : std::uint8_t { construct, verify, hash, session };
inline constexpr std::size_t kEffortKinds = 4;

class EffortLedger {
 public:
  void spend(EffortKind k, double units) {
    if (units > 0) spent_[static_cast<std::size_t>(k)] += units;
  }
  void impose(double units) {
    if (units > 0) imposed_ += units;
  }
  double spent(EffortKind k) const { return spent_[static_cast<std::size_t>(k)]; }
  double total() const { return spent_[0] + spent_[1] + spent_[2] + spent_[3]; }
  double imposed() const { return imposed_; }

  EffortLedger& operator+=(const EffortLedger& o) {
    for (std::size_t i = 0; i < kEffortKinds; ++i) spent_[i] += o.spent_[i];
    imposed_ += o.imposed_;
    return *this;
  }

 private:
  std::array<double, kEffortKinds> spent_{};
  double imposed_ = 0;
};

}  // namespace lockss
