#pragma once

#include <cstdint>
#include <span>

namespace lockss {

enum class BlockVerdict : std::uint8_t { agree, disagree, inconclusive, inquorate };

struct BlockTally {
  std::uint32_t agreeing = 0;
  std::uint32_t disagreeing = 0;
  BlockVerdict verdict = BlockVerdict::inquorate;
};

// Landslide rule over the inner-circle digests for one block. Agreement
// needs at most `max_disagree` dissenters; disagreement is the mirror image.
inline BlockTally verdict_of(std::uint32_t agreeing, std::uint32_t disagreeing, std::uint32_t quorum,
                             std::uint32_t max_disagree) {
  BlockTally t{agreeing, disagreeing, BlockVerdict::inquorate};
  if (agreeing + disagreeing < quorum) {
    t.verdict = BlockVerdict::inquorate;
  } else if (t.disagreeing <= max_disagree) {
    t.verdict = BlockVerdict::agree;
  } else if (t.agreeing <= max_disagree) {
    t.verdict = BlockVerdict::disagree;
  } else {
    t.verdict = BlockVerdict::inconclusive;
  }
  return t;
}

inline BlockTally tally_block(std::span<const std::uint64_t> inner_digests, std::uint64_t own_digest,
                              std::uint32_t quorum, std::uint32_t max_disagree) {
  std::uint32_t agree = 0;
  for (std::uint64_t d : inner_digests) agree += d == own_digest ? 1 : 0;
  return verdict_of(agree, static_cast<std::uint32_t>(inner_digests.size()) - agree, quorum, max_disagree);
}

// Each vote was hashed with its own nonce, so the poller's expected digest
// differs per vote.
inline BlockTally tally_block(std::span<const std::uint64_t> inner_digests, std::span<const std::uint64_t> expected,
                              std::uint32_t quorum, std::uint32_t max_disagree) {
  std::uint32_t agree = 0;
  for (std::size_t i = 0; i < inner_digests.size(); ++i) agree += inner_digests[i] == expected[i] ? 1 : 0;
  return verdict_of(agree, static_cast<std::uint32_t>(inner_digests.size()) - agree, quorum, max_disagree);
}

}  // namespace lockss
