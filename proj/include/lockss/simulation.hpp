#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lockss/admission.hpp"
#include "lockss/config.hpp"
#include "lockss/content.hpp"
#include "lockss/effort.hpp"
#include "lockss/event_queue.hpp"
#include "lockss/metrics.hpp"
#include "lockss/network.hpp"
#include "lockss/rng.hpp"
#include "lockss/tally.hpp"
#include "lockss/task_schedule.hpp"

namespace lockss {

struct SimOptions {
  std::uint32_t layer = 0;
  // Per-peer busy time recorded by earlier layers (may be empty or shorter than peers).
  std::vector<std::shared_ptr<const BusyIntervals>> preload;
  bool record_schedule = false;    // keep every commitment for the next layer
  bool record_polls = true;
  bool record_exchanges = false;   // effort snapshots at each message boundary
  bool record_admissions = false;  // charity admissions, for refractory checks
  bool record_tallies = false;     // per-block tallies with the votes behind them
  // When set, only these peers call polls (they still vote for others).
  std::optional<std::vector<PeerId>> pollers;
  // When set, every poller's first poll starts here instead of a random phase.
  std::optional<SimTime> first_poll_at;
};

// Cumulative effort of both parties of one loyal exchange at each message
// boundary. The requester of the next service must always be ahead.
struct ExchangeAudit {
  double poller_at_poll = 0;     // poller spent when Poll is sent
  double voter_at_poll = 0;      // voter cost of considering the Poll
  double poller_at_proof = 0;    // poller spent when PollProof is sent
  double voter_at_vote = 0;      // voter spent when the Vote is sent
  double poller_eval = 0;        // poller cost of evaluating that vote
};

struct CharityAdmission {
  std::uint32_t voter = 0;
  std::uint32_t au = 0;
  SimTime at = 0;
};

struct TallyRecord {
  std::uint32_t poller = 0;
  std::uint32_t au = 0;
  std::uint32_t block = 0;
  std::uint64_t own = 0;
  std::vector<std::uint64_t> digests;
  std::vector<std::uint64_t> nonces;
  std::vector<bool> inner;
  BlockVerdict verdict = BlockVerdict::inquorate;
};

struct ScheduleArtifact {
  // One coalesced list per peer.
  std::vector<std::vector<Interval>> per_peer;
};

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, SimOptions opts = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Runs to the configured horizon. May be called once.
  RunTrace run();

  // Inspection and setup hooks.
  const ScenarioConfig& config() const { return cfg_; }
  const EffortSchedule& efforts() const { return eff_; }
  std::uint32_t peers() const { return cfg_.peers; }
  std::uint32_t aus() const { return cfg_.aus_per_layer; }
  Replica& replica(PeerId p, std::uint32_t au) { return replicas_[slot(p, au)]; }
  std::vector<PeerId>& reference_list(PeerId p, std::uint32_t au) { return refs_[slot(p, au)]; }
  const std::vector<PeerId>& friends(PeerId p) const { return friends_[p.value]; }
  AdmissionControl& admission(PeerId p, std::uint32_t au) { return adm_[slot(p, au)]; }
  TaskSchedule& schedule(PeerId p) { return sched_[p.value]; }
  Network& network() { return net_; }
  const EffortLedger& ledger(PeerId p) const { return ledgers_[p.value]; }
  const EffortLedger& adversary_ledger() const { return adv_ledger_; }
  bool is_minion(PeerId p) const { return p.value >= cfg_.peers; }

  const std::vector<ExchangeAudit>& exchange_audits() const { return audits_; }
  const std::vector<CharityAdmission>& charity_admissions() const { return charity_log_; }
  const std::vector<TallyRecord>& tallies() const { return tally_log_; }
  // Peers ever seen as tallied (inner-circle) voters.
  const std::vector<PeerId>& tallied_voters() const { return tallied_voters_; }
  ScheduleArtifact take_schedule_artifact();

 private:
  enum class Ev : std::uint8_t {
    poll_start,
    invite_attempt,
    poll_send,
    poll_arrive,
    ack_arrive,
    ack_timeout,
    proof_send,
    proof_arrive,
    vote_start,
    vote_send,
    vote_arrive,
    vote_timeout,
    inner_end,
    eval_start,
    eval_run,
    repair_request_arrive,
    repair_arrive,
    repair_timeout,
    receipt_arrive,
    receipt_deadline,
    damage,
    housekeeping,
    attack_window,
    flood_arrival,
    brute_attempt,
  };

  struct Event {
    Ev kind;
    std::uint32_t idx;
    std::uint64_t arg;
  };

  enum class PState : std::uint8_t { scheduled, sent, accepted, proof_sent, voted, done };
  enum class VState : std::uint8_t { idle, accepted, proof_received, voting, voted, done };

  struct Exchange {
    std::uint32_t gen = 0;
    PeerId poller{0};
    PeerId voter{0};
    std::uint32_t au = 0;
    std::uint32_t poll = 0;          // poll slot, or kNoPoll for adversary pollers
    std::uint32_t poll_serial = 0;
    bool outer = false;
    std::int32_t retries_left = 0;
    bool poller_active = false;
    bool voter_active = false;
    PState pstate = PState::scheduled;
    VState vstate = VState::idle;
    SimTime remaining_start = 0;
    SimTime proof_due = 0;
    SimTime vote_due = 0;
    SimTime poll_end = 0;
    SimTime slot_start = 0;
    SimTime slot_end = 0;
    std::uint64_t nonce = 0;
    EffortProof intro_proof;
    EffortProof remaining_proof;
    bool remaining_reserved = false;
    std::uint64_t remembered = 0;
    std::uint64_t receipt = 0;
    DamageSnapshot vote_snapshot;
    std::vector<PeerId> vote_identities;
    ExchangeAudit audit;
  };

  struct VoteRec {
    PeerId voter{0};
    bool inner = true;
    std::uint64_t nonce = 0;
    DamageSnapshot snapshot;
    std::uint32_t xid = 0;
    std::uint32_t xgen = 0;
    bool repair_failed = false;
  };

  enum class Phase : std::uint8_t { idle, inner, outer, evaluating, repairing, concluded };

  struct PendingRepair {
    std::uint32_t block = 0;
    std::uint32_t vote = 0;          // index into votes
    std::uint32_t seq = 0;
    bool frivolous = false;
    bool active = false;
    DamageId payload = 0;
  };

  struct PollSlot {
    std::uint32_t serial = 0;
    Phase phase = Phase::idle;
    SimTime start = 0;
    SimTime inner_end = 0;
    SimTime solicit_end = 0;
    SimTime end = 0;
    std::uint32_t outer_wanted = 0;
    std::vector<PeerId> inner;
    std::vector<PeerId> outer;
    std::vector<PeerId> nominations;
    std::vector<VoteRec> votes;
    std::vector<std::uint32_t> blocks;   // blocks that may disagree, in order
    std::size_t block_pos = 0;
    std::vector<std::uint8_t> tried;     // per vote, for the current repair
    PendingRepair repair;
    bool frivolous_done = false;
    bool evaluated = false;
    std::uint32_t repairs = 0;
  };

  static constexpr std::uint32_t kNoPoll = 0xffffffffu;

  std::size_t slot(PeerId p, std::uint32_t au) const { return static_cast<std::size_t>(p.value) * cfg_.aus_per_layer + au; }
  PeerId peer_of(std::size_t s) const { return PeerId{static_cast<std::uint32_t>(s / cfg_.aus_per_layer)}; }
  std::uint32_t au_of(std::size_t s) const { return static_cast<std::uint32_t>(s % cfg_.aus_per_layer); }
  AuId global_au(std::uint32_t au) const { return AuId{opts_.layer * cfg_.aus_per_layer + au}; }

  void schedule_at(SimTime at, Ev kind, std::uint32_t idx, std::uint64_t arg) {
    queue_.schedule(at, Event{kind, idx, arg});
  }
  void dispatch(const Event& e);

  // Exchanges.
  std::uint32_t new_exchange();
  Exchange* live(std::uint32_t xid, std::uint64_t gen);
  void maybe_release(std::uint32_t xid);
  void send(PeerId from, PeerId to, std::uint64_t bytes, Ev kind, std::uint32_t idx, std::uint64_t arg);
  std::uint64_t vote_bytes() const;

  // Poller side.
  void on_poll_start(std::uint32_t ps, std::uint64_t serial);
  void plan_invitation(std::uint32_t ps, PeerId invitee, bool outer, std::int32_t retries, SimTime lo, SimTime hi);
  SimTime attempt_window_end(const PollSlot& poll, bool outer) const;
  void on_invite_attempt(std::uint32_t xid);
  void on_poll_send(std::uint32_t xid);
  void on_ack(std::uint32_t xid, bool accept);
  void on_ack_timeout(std::uint32_t xid);
  void on_proof_send(std::uint32_t xid);
  void on_vote_arrive(std::uint32_t xid);
  void on_vote_timeout(std::uint32_t xid);
  void release_remaining(Exchange& x);
  void give_up(std::uint32_t xid, bool retry);
  bool poll_current(const Exchange& x) const;
  void on_inner_end(std::uint32_t ps, std::uint64_t serial);
  void on_eval_start(std::uint32_t ps, std::uint64_t serial);
  void on_eval_run(std::uint32_t ps, std::uint64_t serial);
  void continue_evaluation(std::uint32_t ps);
  bool request_repair(std::uint32_t ps, std::uint32_t block, bool frivolous);
  void on_repair_request(std::uint32_t ps, std::uint64_t arg);
  void on_repair_arrive(std::uint32_t ps, std::uint64_t arg);
  void on_repair_timeout(std::uint32_t ps, std::uint64_t arg);
  void conclude(std::uint32_t ps, PollStatus status);

  // Voter side.
  void on_poll_arrive(std::uint32_t xid);
  void consider_admitted(std::uint32_t xid);
  void on_proof_arrive(std::uint32_t xid);
  void on_vote_start(std::uint32_t xid);
  void on_vote_send(std::uint32_t xid);
  void on_receipt(std::uint32_t xid);
  void on_receipt_deadline(std::uint32_t xid);

  // Content.
  void on_damage(std::uint32_t rs);

  // Adversary drivers (adversary.cpp).
  void setup_adversary();
  void on_attack_window(std::uint32_t window);
  void on_flood_arrival(std::uint32_t target, std::uint64_t window);
  void on_brute_attempt(std::uint32_t target, std::uint64_t window);
  void adversary_ack(Exchange& x, std::uint32_t xid, bool accept);
  void adversary_vote(Exchange& x, std::uint32_t xid);
  bool window_active(std::uint64_t window, SimTime now) const;

  void charge(PeerId p, EffortKind k, double units);

  ScenarioConfig cfg_;
  SimOptions opts_;
  std::uint64_t seed_;
  EffortSchedule eff_;
  AdmissionParams adm_params_;
  ProofMint mint_;
  EventQueue<Event> queue_;
  Network net_;
  DamageProcess damage_;

  std::vector<Replica> replicas_;
  std::vector<std::vector<PeerId>> refs_;
  std::vector<std::vector<PeerId>> friends_;
  std::vector<AdmissionControl> adm_;
  std::vector<TaskSchedule> sched_;
  std::vector<EffortLedger> ledgers_;
  EffortLedger adv_ledger_;
  std::vector<PollSlot> polls_;
  std::vector<Exchange> xs_;
  std::vector<std::uint32_t> free_xs_;

  std::vector<RngStream> poll_rng_;
  std::vector<RngStream> admit_rng_;
  std::vector<RngStream> vote_rng_;
  std::vector<RngStream> damage_rng_;
  RngStream adv_rng_;

  // Attack windows: [start, end) and the targeted peers of each.
  std::vector<Interval> windows_;
  std::vector<std::vector<std::uint8_t>> targeted_;
  std::uint32_t next_minion_ = 0;

  RunTrace trace_;
  std::vector<ExchangeAudit> audits_;
  std::vector<CharityAdmission> charity_log_;
  std::vector<TallyRecord> tally_log_;
  std::vector<PeerId> tallied_voters_;
  std::vector<std::uint8_t> tallied_seen_;
  bool ran_ = false;

  SimTime ack_wait_ = 0;
  SimTime grace_ = 0;
  SimTime vote_allowance_ = 0;
  SimTime vote_margin_ = 0;
  SimTime exchange_span_ = 0;
  SimTime repair_wait_ = 0;
  SimTime receipt_grace_ = 0;
};

}  // namespace lockss
