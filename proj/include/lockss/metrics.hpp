#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lockss/effort.hpp"
#include "lockss/types.hpp"

namespace lockss {

enum class PollStatus : std::uint8_t {
  success,
  inquorate,
  alarm,
  repair_failed,
  not_evaluated,  // no room left in the schedule to evaluate before the deadline
  overrun,        // still running when the next poll on the AU was due
};

struct PollRecord {
  std::uint32_t peer = 0;
  std::uint32_t au = 0;
  SimTime start = 0;
  SimTime end = 0;
  PollStatus status = PollStatus::inquorate;
  std::uint16_t inner_votes = 0;
  std::uint16_t outer_votes = 0;
};

struct RunCounters {
  std::uint64_t invitations = 0;        // Poll messages sent by loyal pollers
  std::uint64_t admitted = 0;
  std::uint64_t dropped = 0;
  std::uint64_t refractory_rejects = 0;
  std::uint64_t introductions_used = 0;
  std::uint64_t refusals = 0;           // admitted but no room in the schedule
  std::uint64_t votes = 0;              // votes received by loyal pollers
  std::uint64_t proof_timeouts = 0;
  std::uint64_t damage_events = 0;
  std::uint64_t frivolous_repairs = 0;
  std::uint64_t rejected_repairs = 0;   // repair blocks that failed re-evaluation
  std::uint64_t garbage_admitted = 0;
  std::uint64_t adversary_admissions = 0;
  std::uint64_t adversary_attempts = 0;
  std::uint64_t messages_dropped = 0;
  std::uint64_t messages_delivered = 0;
};

// Everything the metrics need from one completed run.
struct RunTrace {
  std::uint32_t peers = 0;
  std::uint32_t aus = 0;
  SimTime horizon = 0;
  SimTime damaged_time = 0;     // summed over replicas
  std::uint64_t polls = 0;      // concluded polls
  std::uint64_t successful_polls = 0;
  std::uint64_t alarms = 0;
  std::uint64_t repairs = 0;
  std::uint64_t corrupt_repairs = 0;
  EffortLedger loyal;
  EffortLedger adversary;
  bool adversary_effortful = false;  // cost ratio is defined
  double busyness = 0;          // fraction of peer time committed, preload included
  std::uint64_t events = 0;
  std::uint64_t trace_digest = 0;
  RunCounters counters;
  std::vector<std::uint32_t> replica_successes;  // per (peer, AU), peer-major
  std::vector<PollRecord> poll_log;

  std::uint64_t replicas() const { return static_cast<std::uint64_t>(peers) * aus; }
};

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

// Time-averaged fraction of damaged replicas.
double access_failure(const RunTrace& t);
// Same, from explicit damage intervals: one list per replica, intervals may overlap.
double access_failure(std::span<const std::vector<Interval>> damage, SimTime horizon);

// Mean time between successful polls in days: horizon / successes for each
// (peer, AU), then averaged. A replica with no success counts as one full
// horizon, which is a lower bound. Without per-replica counts, falls back to
// the pooled value.
double mean_success_gap(const RunTrace& t);
// Attack over baseline; NaN if the baseline had no successes, +inf if the attack had none.
double delay_ratio(const RunTrace& attack, const RunTrace& baseline);
// Loyal effort per successful poll, attack over baseline.
double friction(const RunTrace& attack, const RunTrace& baseline);
// Adversary effort over loyal effort; NaN when the adversary spends no effort by design.
double cost_ratio(const RunTrace& attack);

struct MetricsRow {
  double access_failure = 0;
  double delay_ratio = 1;
  double friction = 1;
  double cost_ratio = kNotApplicable;
  double alarms = 0;
  double successful_polls = 0;
  double loyal_effort = 0;
  double adversary_effort = 0;
  double busyness = 0;
};

MetricsRow metrics_row(const RunTrace& attack, const RunTrace& baseline);

// Equal-weight mean of ratio and probability fields; counts and efforts are summed.
MetricsRow combine_layers(std::span<const MetricsRow> layers);

struct MetricsSummary {
  MetricsRow mean;
  MetricsRow min;
  MetricsRow max;
};
MetricsSummary summarize(std::span<const MetricsRow> runs);

double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace lockss
