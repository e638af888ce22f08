#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lockss/admission.hpp"
#include "lockss/content.hpp"
#include "lockss/effort.hpp"
#include "lockss/types.hpp"

namespace lockss {

enum class AttackKind : std::uint8_t { none, pipe_stoppage, admission_flood, brute_force, reputation };
enum class Defection : std::uint8_t { none, intro, remaining };

std::string_view attack_name(AttackKind k);
std::string_view defection_name(Defection d);

struct AdversaryConfig {
  AttackKind kind = AttackKind::none;
  double coverage = 1.0;            // fraction of loyal peers targeted per attack window
  double attack_days = 730;
  double recuperation_days = 30;
  Defection defection = Defection::none;
  double flood_rate_per_day = 100;  // garbage invitations per victim per AU per day
  std::uint32_t minions = 10;       // identity pool of the brute-force adversary

  friend bool operator==(const AdversaryConfig&, const AdversaryConfig&) = default;
};

struct ScenarioConfig {
  std::string scenario = "baseline";
  std::uint32_t peers = 100;
  std::uint32_t aus_per_layer = 50;
  std::uint32_t layers = 1;
  double horizon_days = 730;
  std::vector<std::uint64_t> seeds{1, 2, 3};

  // Polling.
  double inter_poll_days = 90;
  std::uint32_t quorum = 10;
  std::uint32_t max_disagree = 3;
  std::uint32_t inner_circle = 20;
  double solicit_fraction = 0.8;
  std::int32_t invite_retries = -1;     // per invitee; negative means until the window closes
  double retry_gap_days = 0.5;          // mean of exponential retry gaps; 0 = uniform over the rest of the window
  double ack_wait_s = 600;
  double vote_allowance_votes = 100;    // vote window, in multiples of one vote's compute time
  double frivolous_repair_prob = 0.1;
  double repair_wait_s = 600;

  // Reference lists and discovery.
  std::uint32_t reference_target = 60;
  std::uint32_t friends = 10;
  std::uint32_t friends_per_poll = 2;
  std::uint32_t initial_random_references = 50;
  double nomination_fraction = 0.1;
  std::uint32_t nomination_cap = 10;
  double introduction_share = 0.5;      // expected share of vote identities treated as introductions

  // Admission control.
  double drop_unknown = 0.90;
  double drop_debt = 0.80;
  double refractory_days = 1;
  double decay_days = 180;
  std::uint32_t intro_cap = 3;
  Grade initial_grade = Grade::even;    // grade loyal peers start with for each other

  // Content and damage.
  double mtbf_years = 5;
  double aus_per_disk = 50;
  std::uint32_t au_blocks = 512;
  std::uint64_t block_bytes = 1ull << 20;

  // Effort.
  double hash_bytes_per_sec = 50e6;
  double verify_ratio = 20;
  double session_cost = 0.01;
  double intro_share = 0.2;
  double poller_margin = 0.1;

  // Wire sizes.
  std::uint64_t header_bytes = 1024;
  std::uint64_t digest_bytes = 20;

  AdversaryConfig adversary;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  AuShape au_shape() const { return AuShape::with_blocks(au_blocks, block_bytes); }
  EffortParams effort_params() const;
  AdmissionParams admission_params() const;
  SimTime horizon() const { return from_days(horizon_days); }
  SimTime inter_poll() const { return from_days(inter_poll_days); }

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sets one field from its text form. Throws ConfigError on an unknown key or
// malformed value.
void set_field(ScenarioConfig& cfg, std::string_view key, std::string_view value);
std::string get_field(const ScenarioConfig& cfg, std::string_view key);
std::vector<std::string> field_names();

// Flat "key = value" text, one key per line, '#' starts a comment.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace lockss
