#include "lockss/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lockss {

namespace {

std::string peer_label(const char* what, std::uint32_t p) { return std::string(what) + "/" + std::to_string(p); }

bool contains(const std::vector<PeerId>& v, PeerId p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// Nonce tweaks that tie each proof to its stage.
constexpr std::uint64_t kIntroTweak = 1;
constexpr std::uint64_t kRemainingTweak = 2;

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, SimOptions opts)
    : cfg_(cfg),
      opts_(std::move(opts)),
      seed_(seed),
      eff_(size_efforts(cfg.au_shape(), cfg.effort_params())),
      adm_params_(cfg.admission_params()),
      mint_(mix(seed, label_hash("mint"))),
      damage_(cfg.mtbf_years, cfg.aus_per_disk),
      adv_rng_(seed, "adversary") {
  cfg_.validate();
  const std::uint32_t n = cfg_.peers;
  const std::uint32_t a = cfg_.aus_per_layer;
  const std::uint32_t minions = cfg_.adversary.kind == AttackKind::brute_force ? cfg_.adversary.minions : 0;
  const std::size_t id_space = static_cast<std::size_t>(n) + minions;
  // Topology is shared by every layer of a chain; protocol randomness is not.
  const std::uint64_t layer_seed = opts_.layer == 0 ? seed : mix(seed, opts_.layer);

  RngStream net_rng(seed, "network");
  net_ = Network(n, net_rng);

  RngStream topo(seed, "friends");
  friends_.resize(n);
  std::vector<PeerId> everyone;
  for (std::uint32_t p = 0; p < n; ++p) everyone.emplace_back(p);
  for (std::uint32_t p = 0; p < n; ++p) {
    std::vector<PeerId> others;
    for (PeerId q : everyone)
      if (q.value != p) others.push_back(q);
    friends_[p] = topo.sample(std::span<const PeerId>(others), cfg_.friends);
  }

  RngStream ref_rng(layer_seed, "references");
  replicas_.reserve(static_cast<std::size_t>(n) * a);
  refs_.resize(static_cast<std::size_t>(n) * a);
  adm_.reserve(static_cast<std::size_t>(n) * a);
  const SimTime decay = from_days(cfg_.decay_days);
  for (std::uint32_t p = 0; p < n; ++p) {
    std::vector<PeerId> strangers;
    for (PeerId q : everyone)
      if (q.value != p && !contains(friends_[p], q)) strangers.push_back(q);
    for (std::uint32_t au = 0; au < a; ++au) {
      replicas_.emplace_back(PeerId{p}, global_au(au), cfg_.au_blocks);
      auto& r = refs_[slot(PeerId{p}, au)];
      r = friends_[p];
      auto extra = ref_rng.sample(std::span<const PeerId>(strangers), cfg_.initial_random_references);
      r.insert(r.end(), extra.begin(), extra.end());

      adm_.emplace_back(id_space, decay, cfg_.intro_cap);
      auto& known = adm_.back().known();
      if (cfg_.initial_grade != Grade::unknown) {
        for (std::uint32_t q = 0; q < n; ++q)
          if (q != p) known.set(PeerId{q}, cfg_.initial_grade, 0);
      }
      for (std::uint32_t m = 0; m < minions; ++m) known.set(PeerId{n + m}, Grade::debt, 0);
    }
  }

  sched_.resize(n);
  for (std::uint32_t p = 0; p < n; ++p) {
    if (p < opts_.preload.size() && opts_.preload[p]) sched_[p].set_preload(opts_.preload[p]);
    sched_[p].set_recording(opts_.record_schedule);
  }
  ledgers_.resize(n);
  polls_.resize(static_cast<std::size_t>(n) * a);
  tallied_seen_.assign(id_space, 0);

  for (std::uint32_t p = 0; p < n; ++p) {
    poll_rng_.emplace_back(layer_seed, peer_label("poll", p));
    admit_rng_.emplace_back(layer_seed, peer_label("admit", p));
    vote_rng_.emplace_back(layer_seed, peer_label("vote", p));
    damage_rng_.emplace_back(layer_seed, peer_label("damage", p));
  }

  ack_wait_ = from_seconds(cfg_.ack_wait_s);
  grace_ = kSecond;
  vote_allowance_ = static_cast<SimTime>(std::llround(cfg_.vote_allowance_votes * eff_.duration(eff_.vote)));
  vote_margin_ = kMinute;
  repair_wait_ = from_seconds(cfg_.repair_wait_s);
  receipt_grace_ = kHour;
  exchange_span_ = eff_.duration(eff_.intro) + ack_wait_ + eff_.duration(eff_.remaining) + grace_ + vote_allowance_ +
                   vote_margin_;

  trace_.peers = n;
  trace_.aus = a;
  trace_.replica_successes.assign(static_cast<std::size_t>(n) * a, 0);
  trace_.horizon = cfg_.horizon();
}

Simulation::~Simulation() = default;

RunTrace Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run called twice");
  ran_ = true;
  const SimTime horizon = cfg_.horizon();
  const SimTime interval = cfg_.inter_poll();

  std::vector<std::uint8_t> polling(cfg_.peers, opts_.pollers ? 0 : 1);
  if (opts_.pollers)
    for (PeerId p : *opts_.pollers)
      if (p.value < cfg_.peers) polling[p.value] = 1;

  for (std::uint32_t p = 0; p < cfg_.peers; ++p) {
    for (std::uint32_t au = 0; au < cfg_.aus_per_layer; ++au) {
      const auto ps = static_cast<std::uint32_t>(slot(PeerId{p}, au));
      if (polling[p]) {
        // Random phase keeps polls on different AUs from synchronizing.
        const SimTime t0 = opts_.first_poll_at ? *opts_.first_poll_at : poll_rng_[p].uniform_time(0, interval);
        if (t0 < horizon) schedule_at(t0, Ev::poll_start, ps, 0);
      }
      if (damage_.enabled()) {
        const SimTime gap = damage_.next_gap(damage_rng_[p]);
        if (gap != kNever && gap < horizon) schedule_at(gap, Ev::damage, ps, 0);
      }
    }
  }
  schedule_at(kDay, Ev::housekeeping, 0, 0);
  setup_adversary();

  queue_.run_until(horizon, [this](const Event& e) { dispatch(e); });

  SimTime damaged = 0;
  for (const Replica& r : replicas_) damaged += r.damaged_time(horizon);
  trace_.damaged_time = damaged;
  for (const auto& l : ledgers_) trace_.loyal += l;
  trace_.adversary = adv_ledger_;
  trace_.adversary_effortful = cfg_.adversary.kind == AttackKind::brute_force;
  long double busy = 0;
  for (const auto& s : sched_) {
    busy += s.committed_time();
    if (s.preload()) busy += s.preload()->busy_time(0, horizon);
  }
  trace_.busyness = static_cast<double>(busy / (static_cast<long double>(cfg_.peers) * horizon));
  trace_.events = queue_.dispatched();
  trace_.trace_digest = queue_.trace_digest();
  trace_.counters.damage_events = damage_.events();
  trace_.counters.messages_delivered = net_.delivered();
  trace_.counters.messages_dropped = net_.dropped();
  return std::move(trace_);
}

ScheduleArtifact Simulation::take_schedule_artifact() {
  ScheduleArtifact art;
  art.per_peer.reserve(sched_.size());
  for (auto& s : sched_) art.per_peer.push_back(s.take_history());
  return art;
}

void Simulation::dispatch(const Event& e) {
  const auto gen = e.arg;
  switch (e.kind) {
    case Ev::poll_start: on_poll_start(e.idx, e.arg); break;
    case Ev::invite_attempt: if (live(e.idx, gen)) on_invite_attempt(e.idx); break;
    case Ev::poll_send: if (live(e.idx, gen)) on_poll_send(e.idx); break;
    case Ev::poll_arrive: if (live(e.idx, gen)) on_poll_arrive(e.idx); break;
    case Ev::ack_arrive: if (live(e.idx, gen >> 1)) on_ack(e.idx, (gen & 1) != 0); break;
    case Ev::ack_timeout: if (live(e.idx, gen)) on_ack_timeout(e.idx); break;
    case Ev::proof_send: if (live(e.idx, gen)) on_proof_send(e.idx); break;
    case Ev::proof_arrive: if (live(e.idx, gen)) on_proof_arrive(e.idx); break;
    case Ev::vote_start: if (live(e.idx, gen)) on_vote_start(e.idx); break;
    case Ev::vote_send: if (live(e.idx, gen)) on_vote_send(e.idx); break;
    case Ev::vote_arrive: if (live(e.idx, gen)) on_vote_arrive(e.idx); break;
    case Ev::vote_timeout: if (live(e.idx, gen)) on_vote_timeout(e.idx); break;
    case Ev::inner_end: on_inner_end(e.idx, e.arg); break;
    case Ev::eval_start: on_eval_start(e.idx, e.arg); break;
    case Ev::eval_run: on_eval_run(e.idx, e.arg); break;
    case Ev::repair_request_arrive: on_repair_request(e.idx, e.arg); break;
    case Ev::repair_arrive: on_repair_arrive(e.idx, e.arg); break;
    case Ev::repair_timeout: on_repair_timeout(e.idx, e.arg); break;
    case Ev::receipt_arrive: if (live(e.idx, gen)) on_receipt(e.idx); break;
    case Ev::receipt_deadline: if (live(e.idx, gen)) on_receipt_deadline(e.idx); break;
    case Ev::damage: on_damage(e.idx); break;
    case Ev::housekeeping:
      for (auto& s : sched_) s.prune_before(queue_.now());
      if (queue_.now() + kDay < cfg_.horizon()) schedule_at(queue_.now() + kDay, Ev::housekeeping, 0, 0);
      break;
    case Ev::attack_window: on_attack_window(e.idx); break;
    case Ev::flood_arrival: on_flood_arrival(e.idx, e.arg); break;
    case Ev::brute_attempt: on_brute_attempt(e.idx, e.arg); break;
  }
}

// ---- exchanges

std::uint32_t Simulation::new_exchange() {
  if (!free_xs_.empty()) {
    const std::uint32_t id = free_xs_.back();
    free_xs_.pop_back();
    const std::uint32_t gen = xs_[id].gen;
    xs_[id] = Exchange{};
    xs_[id].gen = gen;
    return id;
  }
  xs_.emplace_back();
  return static_cast<std::uint32_t>(xs_.size() - 1);
}

Simulation::Exchange* Simulation::live(std::uint32_t xid, std::uint64_t gen) {
  if (xid >= xs_.size() || xs_[xid].gen != static_cast<std::uint32_t>(gen)) return nullptr;
  return &xs_[xid];
}

void Simulation::maybe_release(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.poller_active || x.voter_active) return;
  ++x.gen;
  x.vote_snapshot.clear();
  x.vote_identities.clear();
  free_xs_.push_back(xid);
}

void Simulation::send(PeerId from, PeerId to, std::uint64_t bytes, Ev kind, std::uint32_t idx, std::uint64_t arg) {
  if (auto at = net_.transmit(from, to, bytes, queue_.now())) schedule_at(*at, kind, idx, arg);
}

std::uint64_t Simulation::vote_bytes() const {
  // One digest and one effort proof per block.
  return cfg_.header_bytes + 2 * cfg_.digest_bytes * cfg_.au_blocks;
}

void Simulation::charge(PeerId p, EffortKind k, double units) {
  if (is_minion(p)) {
    adv_ledger_.spend(k, units);
  } else {
    ledgers_[p.value].spend(k, units);
  }
}

// ---- poller side

bool Simulation::poll_current(const Exchange& x) const {
  return x.poll != kNoPoll && polls_[x.poll].serial == x.poll_serial;
}

SimTime Simulation::attempt_window_end(const PollSlot& poll, bool outer) const {
  const SimTime last = poll.solicit_end - exchange_span_;
  return outer ? last : std::min(poll.inner_end, last);
}

void Simulation::on_poll_start(std::uint32_t ps, std::uint64_t) {
  const SimTime now = queue_.now();
  PollSlot& poll = polls_[ps];
  if (poll.phase != Phase::idle && poll.phase != Phase::concluded) conclude(ps, PollStatus::overrun);

  const PeerId poller = peer_of(ps);
  RngStream& rng = poll_rng_[poller.value];
  const SimTime interval = cfg_.inter_poll();

  ++poll.serial;
  poll.phase = Phase::inner;
  poll.start = now;
  poll.end = now + interval;
  poll.solicit_end = now + static_cast<SimTime>(std::llround(cfg_.solicit_fraction * interval));
  const auto& refs = refs_[ps];
  const std::uint32_t have = static_cast<std::uint32_t>(refs.size());
  poll.outer_wanted = have >= cfg_.reference_target ? 0 : cfg_.reference_target - have;
  // The inner circle gets a share of the solicitation window proportional to
  // its share of the votes wanted.
  const double q = cfg_.quorum;
  const SimTime window = poll.solicit_end - now;
  poll.inner_end = now + static_cast<SimTime>(std::llround(window * q / (q + poll.outer_wanted)));
  poll.inner = rng.sample(std::span<const PeerId>(refs), cfg_.inner_circle);
  poll.outer.clear();
  poll.nominations.clear();
  poll.votes.clear();
  poll.blocks.clear();
  poll.block_pos = 0;
  poll.tried.clear();
  poll.repair = PendingRepair{};
  poll.frivolous_done = false;
  poll.evaluated = false;
  poll.repairs = 0;

  const SimTime hi = attempt_window_end(poll, false);
  for (PeerId v : poll.inner) plan_invitation(ps, v, false, cfg_.invite_retries, now, hi);

  if (poll.outer_wanted > 0) schedule_at(poll.inner_end, Ev::inner_end, ps, poll.serial);
  schedule_at(poll.solicit_end, Ev::eval_start, ps, poll.serial);
  // Fixed rate: the next poll is due one interval later whatever happens.
  if (poll.end < cfg_.horizon()) schedule_at(poll.end, Ev::poll_start, ps, 0);
}

void Simulation::plan_invitation(std::uint32_t ps, PeerId invitee, bool outer, std::int32_t retries, SimTime lo,
                                 SimTime hi) {
  if (hi <= lo) return;
  const PeerId poller = peer_of(ps);
  const SimTime at = poll_rng_[poller.value].uniform_time(lo, hi);
  const std::uint32_t xid = new_exchange();
  Exchange& x = xs_[xid];
  x.poller = poller;
  x.voter = invitee;
  x.au = au_of(ps);
  x.poll = ps;
  x.poll_serial = polls_[ps].serial;
  x.outer = outer;
  x.retries_left = retries;
  x.poller_active = true;
  x.pstate = PState::scheduled;
  schedule_at(at, Ev::invite_attempt, xid, x.gen);
}

void Simulation::on_invite_attempt(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (!poll_current(x) || (polls_[x.poll].phase != Phase::inner && polls_[x.poll].phase != Phase::outer)) {
    give_up(xid, false);
    return;
  }
  const SimTime now = queue_.now();
  const PollSlot& poll = polls_[x.poll];
  TaskSchedule& sched = sched_[x.poller.value];
  const SimTime intro_d = eff_.duration(eff_.intro);
  const SimTime rem_d = eff_.duration(eff_.remaining);

  const SimTime a = sched.earliest_free(now, intro_d);
  const SimTime b = sched.earliest_free(a + intro_d + ack_wait_, rem_d);
  const SimTime vote_due = b + rem_d + grace_ + vote_allowance_;
  if (vote_due + vote_margin_ > poll.solicit_end) {
    // Too busy to finish this exchange before evaluation.
    give_up(xid, false);
    return;
  }
  sched.try_reserve(now, Interval{a, a + intro_d}, TaskKind::construct_effort, eff_.intro);
  sched.try_reserve(now, Interval{b, b + rem_d}, TaskKind::construct_effort, eff_.remaining);
  x.remaining_start = b;
  x.remaining_reserved = true;
  x.proof_due = b + rem_d;
  x.vote_due = vote_due;
  x.poll_end = poll.end;
  x.nonce = poll_rng_[x.poller.value].next();
  x.intro_proof = mint_.construct(mix(x.nonce, kIntroTweak), eff_.intro);
  schedule_at(a + intro_d, Ev::poll_send, xid, x.gen);
}

void Simulation::on_poll_send(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (!poll_current(x) || (polls_[x.poll].phase != Phase::inner && polls_[x.poll].phase != Phase::outer)) {
    charge(x.poller, EffortKind::construct, eff_.intro);
    release_remaining(x);
    give_up(xid, false);
    return;
  }
  charge(x.poller, EffortKind::construct, eff_.intro);
  charge(x.poller, EffortKind::session, eff_.session);
  x.audit.poller_at_poll = eff_.intro + eff_.session;
  x.pstate = PState::sent;
  ++trace_.counters.invitations;
  send(x.poller, x.voter, cfg_.header_bytes, Ev::poll_arrive, xid, x.gen);
  schedule_at(queue_.now() + ack_wait_, Ev::ack_timeout, xid, x.gen);
}

void Simulation::on_ack(std::uint32_t xid, bool accept) {
  Exchange& x = xs_[xid];
  if (is_minion(x.poller)) {
    adversary_ack(x, xid, accept);
    return;
  }
  if (x.pstate != PState::sent) return;
  if (accept) {
    x.pstate = PState::accepted;
    schedule_at(x.proof_due, Ev::proof_send, xid, x.gen);
  } else {
    release_remaining(x);
    give_up(xid, true);
  }
}

void Simulation::on_ack_timeout(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.pstate != PState::sent) return;
  if (is_minion(x.poller)) {
    x.pstate = PState::done;
    x.poller_active = false;
    maybe_release(xid);
    return;
  }
  release_remaining(x);
  give_up(xid, true);
}

void Simulation::release_remaining(Exchange& x) {
  if (!x.remaining_reserved) return;
  x.remaining_reserved = false;
  const SimTime now = queue_.now();
  if (x.remaining_start >= now) {
    sched_[x.poller.value].truncate(x.remaining_start, x.remaining_start);
  } else {
    // Already under way: the work done so far is spent.
    sched_[x.poller.value].truncate(x.remaining_start, now);
    const double frac = static_cast<double>(now - x.remaining_start) /
                        static_cast<double>(std::max<SimTime>(1, x.proof_due - x.remaining_start));
    charge(x.poller, EffortKind::construct, eff_.remaining * std::min(1.0, frac));
  }
}

void Simulation::give_up(std::uint32_t xid, bool retry) {
  Exchange& x = xs_[xid];
  x.pstate = PState::done;
  x.poller_active = false;
  const std::uint32_t ps = x.poll;
  const PeerId voter = x.voter;
  const bool outer = x.outer;
  const std::int32_t left = x.retries_left;
  const bool current = poll_current(x);
  maybe_release(xid);
  if (!retry || !current || left == 0) return;
  const PollSlot& poll = polls_[ps];
  if (poll.phase != Phase::inner && poll.phase != Phase::outer) return;
  const SimTime now = queue_.now();
  const SimTime last = attempt_window_end(poll, outer);
  const std::int32_t next_left = left < 0 ? left : left - 1;
  if (cfg_.retry_gap_days > 0) {
    const double gap = poll_rng_[peer_of(ps).value].exponential(1.0 / cfg_.retry_gap_days);
    const SimTime at = now + std::max<SimTime>(1, static_cast<SimTime>(std::llround(gap * kDay)));
    if (at <= last) plan_invitation(ps, voter, outer, next_left, at, at + 1);
  } else {
    plan_invitation(ps, voter, outer, next_left, now + 1, last + 1);
  }
}

void Simulation::on_proof_send(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.pstate != PState::accepted) return;
  x.remaining_reserved = false;
  charge(x.poller, EffortKind::construct, eff_.remaining);
  if (!poll_current(x) || (polls_[x.poll].phase != Phase::inner && polls_[x.poll].phase != Phase::outer)) {
    give_up(xid, false);
    return;
  }
  x.remaining_proof = mint_.construct(mix(x.nonce, kRemainingTweak), eff_.remaining);
  x.audit.poller_at_proof = eff_.intro + eff_.remaining + eff_.session;
  x.pstate = PState::proof_sent;
  send(x.poller, x.voter, cfg_.header_bytes, Ev::proof_arrive, xid, x.gen);
  schedule_at(x.vote_due + vote_margin_, Ev::vote_timeout, xid, x.gen);
}

void Simulation::on_vote_arrive(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (is_minion(x.poller)) {
    adversary_vote(x, xid);
    return;
  }
  if (x.pstate != PState::proof_sent) return;
  if (!poll_current(x) || (polls_[x.poll].phase != Phase::inner && polls_[x.poll].phase != Phase::outer)) {
    // Too late to be counted; no receipt will follow.
    x.pstate = PState::done;
    x.poller_active = false;
    maybe_release(xid);
    return;
  }
  PollSlot& poll = polls_[x.poll];
  x.pstate = PState::voted;
  ++trace_.counters.votes;
  poll.votes.push_back(VoteRec{x.voter, !x.outer, x.nonce, x.vote_snapshot, xid, x.gen, false});

  x.audit.poller_eval = eff_.evaluate_vote;
  if (opts_.record_exchanges) audits_.push_back(x.audit);

  // Identities in the vote: some become introductions, the rest nominations.
  std::vector<PeerId> intros;
  RngStream& rng = vote_rng_[x.poller.value];
  for (PeerId id : x.vote_identities) {
    if (id == x.poller) continue;
    if (rng.bernoulli(cfg_.introduction_share)) {
      intros.push_back(id);
    } else if (!x.outer) {
      poll.nominations.push_back(id);
    }
  }
  if (!intros.empty()) adm_[x.poll].intros().register_introductions(x.voter, intros);
}

void Simulation::on_vote_timeout(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.pstate != PState::proof_sent) return;
  adm_[slot(x.poller, x.au)].known().record(x.voter, Outcome::misbehaved, queue_.now());
  give_up(xid, true);
}

void Simulation::on_inner_end(std::uint32_t ps, std::uint64_t serial) {
  PollSlot& poll = polls_[ps];
  if (poll.serial != serial || poll.phase != Phase::inner) return;
  poll.phase = Phase::outer;
  const PeerId poller = peer_of(ps);
  const auto& refs = refs_[ps];
  std::vector<PeerId> pool;
  std::sort(poll.nominations.begin(), poll.nominations.end());
  poll.nominations.erase(std::unique(poll.nominations.begin(), poll.nominations.end()), poll.nominations.end());
  for (PeerId p : poll.nominations) {
    if (p == poller || is_minion(p) || contains(refs, p) || contains(poll.inner, p)) continue;
    pool.push_back(p);
  }
  poll.outer = poll_rng_[poller.value].sample(std::span<const PeerId>(pool), poll.outer_wanted);
  const SimTime now = queue_.now();
  const SimTime hi = attempt_window_end(poll, true);
  const auto outer = poll.outer;
  for (PeerId v : outer) plan_invitation(ps, v, true, cfg_.invite_retries, now, hi);
}

void Simulation::on_eval_start(std::uint32_t ps, std::uint64_t serial) {
  PollSlot& poll = polls_[ps];
  if (poll.serial != serial || (poll.phase != Phase::inner && poll.phase != Phase::outer)) return;
  poll.phase = Phase::evaluating;
  if (poll.votes.empty()) {
    conclude(ps, PollStatus::inquorate);
    return;
  }
  const PeerId poller = peer_of(ps);
  const SimTime now = queue_.now();
  const double effort = eff_.evaluate_vote * static_cast<double>(poll.votes.size());
  const SimTime dur = eff_.duration(effort);
  TaskSchedule& sched = sched_[poller.value];
  const SimTime s = sched.earliest_free(now, dur);
  if (s + dur > poll.end) {
    conclude(ps, PollStatus::not_evaluated);
    return;
  }
  sched.try_reserve(now, Interval{s, s + dur}, TaskKind::evaluate, effort);
  schedule_at(s + dur, Ev::eval_run, ps, serial);
}

void Simulation::on_eval_run(std::uint32_t ps, std::uint64_t serial) {
  PollSlot& poll = polls_[ps];
  if (poll.serial != serial || poll.phase != Phase::evaluating) return;
  const PeerId poller = peer_of(ps);
  const double n = static_cast<double>(poll.votes.size());
  charge(poller, EffortKind::hash, eff_.au_hash * n);
  charge(poller, EffortKind::verify, (eff_.evaluate_vote - eff_.au_hash) * n);
  poll.evaluated = true;

  std::uint32_t inner = 0;
  for (const auto& v : poll.votes) inner += v.inner ? 1 : 0;
  if (inner < cfg_.quorum) {
    conclude(ps, PollStatus::inquorate);
    return;
  }
  for (const auto& v : poll.votes) {
    if (v.inner && !tallied_seen_[v.voter.value]) {
      tallied_seen_[v.voter.value] = 1;
      tallied_voters_.push_back(v.voter);
    }
  }
  // Only blocks some party reports damaged can disagree; every other block
  // agrees trivially and is skipped.
  std::vector<std::uint32_t> blocks;
  for (const auto& d : replicas_[ps].snapshot()) blocks.push_back(d.block);
  for (const auto& v : poll.votes)
    if (v.inner)
      for (const auto& d : v.snapshot) blocks.push_back(d.block);
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  poll.blocks = std::move(blocks);
  poll.block_pos = 0;
  poll.tried.assign(poll.votes.size(), 0);
  continue_evaluation(ps);
}

void Simulation::continue_evaluation(std::uint32_t ps) {
  PollSlot& poll = polls_[ps];
  const PeerId poller = peer_of(ps);
  const AuId au = global_au(au_of(ps));
  const Replica& rep = replicas_[ps];
  std::vector<std::uint64_t> digests, expected;
  while (poll.block_pos < poll.blocks.size()) {
    const std::uint32_t b = poll.blocks[poll.block_pos];
    digests.clear();
    expected.clear();
    const DamageId own = rep.state(b);
    for (const auto& v : poll.votes) {
      if (!v.inner) continue;
      digests.push_back(block_digest(au, b, v.nonce, damage_at(v.snapshot, b)));
      expected.push_back(block_digest(au, b, v.nonce, own));
    }
    const BlockTally t = tally_block(digests, expected, cfg_.quorum, cfg_.max_disagree);
    if (opts_.record_tallies) {
      TallyRecord rec{poller.value, au_of(ps), b, own, {}, {}, {}, t.verdict};
      for (const auto& v : poll.votes) {
        rec.digests.push_back(block_digest(au, b, v.nonce, damage_at(v.snapshot, b)));
        rec.nonces.push_back(v.nonce);
        rec.inner.push_back(v.inner);
      }
      tally_log_.push_back(std::move(rec));
    }
    if (t.verdict == BlockVerdict::agree) {
      ++poll.block_pos;
      std::fill(poll.tried.begin(), poll.tried.end(), 0);
      continue;
    }
    if (t.verdict == BlockVerdict::inconclusive) {
      conclude(ps, PollStatus::alarm);
      return;
    }
    if (!request_repair(ps, b, false)) conclude(ps, PollStatus::repair_failed);
    return;
  }
  if (!poll.frivolous_done) {
    poll.frivolous_done = true;
    RngStream& rng = poll_rng_[poller.value];
    if (rng.bernoulli(cfg_.frivolous_repair_prob)) {
      const auto b = static_cast<std::uint32_t>(rng.below(cfg_.au_blocks));
      if (request_repair(ps, b, true)) return;
    }
  }
  conclude(ps, PollStatus::success);
}

bool Simulation::request_repair(std::uint32_t ps, std::uint32_t block, bool frivolous) {
  PollSlot& poll = polls_[ps];
  const PeerId poller = peer_of(ps);
  const DamageId own = replicas_[ps].state(block);
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t i = 0; i < poll.votes.size(); ++i) {
    const auto& v = poll.votes[i];
    if (poll.tried[i]) continue;
    if (frivolous) {
      candidates.push_back(i);
    } else if (v.inner && damage_at(v.snapshot, block) != own) {
      candidates.push_back(i);
    }
  }
  if (candidates.empty()) return false;
  const std::uint32_t pick = candidates[poll_rng_[poller.value].below(candidates.size())];
  poll.tried[pick] = 1;
  poll.phase = Phase::repairing;
  poll.repair = PendingRepair{block, pick, poll.repair.seq + 1, frivolous, true, 0};
  const std::uint64_t arg = (static_cast<std::uint64_t>(poll.serial) << 32) | poll.repair.seq;
  send(poller, poll.votes[pick].voter, cfg_.header_bytes, Ev::repair_request_arrive, ps, arg);
  schedule_at(queue_.now() + repair_wait_, Ev::repair_timeout, ps, arg);
  return true;
}

namespace {
bool repair_matches(std::uint32_t serial, std::uint32_t seq, std::uint64_t arg) {
  return (arg >> 32) == serial && static_cast<std::uint32_t>(arg) == seq;
}
}  // namespace

void Simulation::on_repair_request(std::uint32_t ps, std::uint64_t arg) {
  PollSlot& poll = polls_[ps];
  if (!poll.repair.active || !repair_matches(poll.serial, poll.repair.seq, arg)) return;
  const PeerId voter = poll.votes[poll.repair.vote].voter;
  // The voter serves the block as it holds it now.
  poll.repair.payload = replicas_[slot(voter, au_of(ps))].state(poll.repair.block);
  charge(voter, EffortKind::session, eff_.session);
  send(voter, peer_of(ps), cfg_.header_bytes + cfg_.block_bytes, Ev::repair_arrive, ps, arg);
}

void Simulation::on_repair_arrive(std::uint32_t ps, std::uint64_t arg) {
  PollSlot& poll = polls_[ps];
  if (!poll.repair.active || !repair_matches(poll.serial, poll.repair.seq, arg)) return;
  poll.repair.active = false;
  poll.phase = Phase::evaluating;
  const PeerId poller = peer_of(ps);
  Replica& rep = replicas_[ps];
  const std::uint32_t b = poll.repair.block;
  if (poll.repair.frivolous) {
    // Only checked against the local copy, never installed.
    ++trace_.counters.frivolous_repairs;
    charge(poller, EffortKind::hash, eff_.block_hash);
    conclude(ps, PollStatus::success);
    return;
  }
  // Re-hash the candidate block against every inner vote and keep it only if
  // that puts the poller in the landslide majority. A source with damage of
  // its own also disagrees with the poller, so its block can't be trusted.
  const AuId gau = global_au(au_of(ps));
  std::vector<std::uint64_t> digests, expected;
  for (const auto& v : poll.votes) {
    if (!v.inner) continue;
    digests.push_back(block_digest(gau, b, v.nonce, damage_at(v.snapshot, b)));
    expected.push_back(block_digest(gau, b, v.nonce, poll.repair.payload));
  }
  charge(poller, EffortKind::hash, eff_.block_hash * static_cast<double>(digests.size()));
  if (tally_block(digests, expected, cfg_.quorum, cfg_.max_disagree).verdict != BlockVerdict::agree) {
    ++trace_.counters.rejected_repairs;
    if (!request_repair(ps, b, false)) conclude(ps, PollStatus::repair_failed);
    return;
  }
  rep.apply_repair(b, poll.repair.payload, queue_.now());
  ++trace_.repairs;
  ++poll.repairs;
  if (poll.repair.payload != 0) ++trace_.corrupt_repairs;
  continue_evaluation(ps);
}

void Simulation::on_repair_timeout(std::uint32_t ps, std::uint64_t arg) {
  PollSlot& poll = polls_[ps];
  if (!poll.repair.active || !repair_matches(poll.serial, poll.repair.seq, arg)) return;
  poll.repair.active = false;
  poll.phase = Phase::evaluating;
  poll.votes[poll.repair.vote].repair_failed = true;
  if (poll.repair.frivolous) {
    conclude(ps, PollStatus::success);
    return;
  }
  if (!request_repair(ps, poll.repair.block, false)) conclude(ps, PollStatus::repair_failed);
}

void Simulation::conclude(std::uint32_t ps, PollStatus status) {
  PollSlot& poll = polls_[ps];
  const PeerId poller = peer_of(ps);
  const std::uint32_t au = au_of(ps);
  const SimTime now = queue_.now();
  AdmissionControl& adm = adm_[ps];

  std::uint16_t inner = 0, outer = 0;
  for (const auto& v : poll.votes) (v.inner ? inner : outer)++;
  if (opts_.record_polls) trace_.poll_log.push_back(PollRecord{poller.value, au, poll.start, now, status, inner, outer});
  ++trace_.polls;
  if (status == PollStatus::success) {
    ++trace_.successful_polls;
    ++trace_.replica_successes[ps];
  }
  if (status == PollStatus::alarm) ++trace_.alarms;

  const std::uint32_t blocks = cfg_.au_blocks;
  for (const auto& v : poll.votes) {
    Exchange* x = live(v.xid, v.xgen);
    if (x == nullptr || x->pstate != PState::voted) continue;
    if (poll.evaluated) {
      // Evaluation walked every block proof, so the receipt can be formed.
      x->receipt = mint_.receipt(v.nonce, blocks);
      send(poller, v.voter, cfg_.header_bytes, Ev::receipt_arrive, v.xid, x->gen);
      if (!v.repair_failed) adm.known().record(v.voter, Outcome::vote_supplied_ok, now);
    }
    x->pstate = PState::done;
    x->poller_active = false;
    maybe_release(v.xid);
  }

  if (status == PollStatus::success) {
    auto& refs = refs_[ps];
    for (const auto& v : poll.votes) {
      if (!v.inner) continue;
      auto it = std::find(refs.begin(), refs.end(), v.voter);
      if (it != refs.end()) refs.erase(it);
      adm.intros().remove_introducer(v.voter);
    }
    const DamageSnapshot& mine = replicas_[ps].snapshot();
    for (const auto& v : poll.votes) {
      if (v.inner || v.snapshot != mine) continue;
      if (v.voter != poller && !contains(refs, v.voter)) refs.push_back(v.voter);
    }
    std::vector<PeerId> pool;
    for (PeerId f : friends_[poller.value])
      if (!contains(refs, f)) pool.push_back(f);
    for (PeerId f : poll_rng_[poller.value].sample(std::span<const PeerId>(pool), cfg_.friends_per_poll))
      refs.push_back(f);
  }
  poll.phase = Phase::concluded;
  poll.repair.active = false;
}

// ---- voter side

void Simulation::on_poll_arrive(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  const std::size_t vs = slot(x.voter, x.au);
  const AdmissionDecision d = adm_[vs].admit(x.poller, queue_.now(), adm_params_, admit_rng_[x.voter.value]);
  switch (d.result) {
    case Admission::dropped: ++trace_.counters.dropped; return;
    case Admission::refractory_reject: ++trace_.counters.refractory_rejects; return;
    case Admission::admitted: break;
  }
  ++trace_.counters.admitted;
  if (d.introducer) ++trace_.counters.introductions_used;
  if (d.charity && opts_.record_admissions) charity_log_.push_back(CharityAdmission{x.voter.value, x.au, queue_.now()});
  consider_admitted(xid);
}

void Simulation::consider_admitted(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  const SimTime now = queue_.now();
  charge(x.voter, EffortKind::session, eff_.session);
  charge(x.voter, EffortKind::verify, eff_.verify_intro);
  x.audit.voter_at_poll = eff_.session + eff_.verify_intro;
  if (!ProofMint::verify(x.intro_proof, eff_.intro, mix(x.nonce, kIntroTweak))) return;

  const SimTime dur = eff_.duration(eff_.verify_remaining + eff_.vote);
  TaskSchedule& sched = sched_[x.voter.value];
  const SimTime from = std::max(now, x.proof_due + grace_);
  const SimTime s = sched.free_slot_before(from, dur, x.vote_due);
  if (s == kNever) {
    ++trace_.counters.refusals;
    send(x.voter, x.poller, cfg_.header_bytes, Ev::ack_arrive, xid, static_cast<std::uint64_t>(x.gen) << 1);
    return;
  }
  sched.try_reserve(now, Interval{s, s + dur}, TaskKind::vote, eff_.verify_remaining + eff_.vote);
  x.voter_active = true;
  x.vstate = VState::accepted;
  x.slot_start = s;
  x.slot_end = s + dur;
  send(x.voter, x.poller, cfg_.header_bytes, Ev::ack_arrive, xid, (static_cast<std::uint64_t>(x.gen) << 1) | 1);
  schedule_at(s, Ev::vote_start, xid, x.gen);
}

void Simulation::on_proof_arrive(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.vstate != VState::accepted) return;
  if (ProofMint::verify(x.remaining_proof, eff_.remaining, mix(x.nonce, kRemainingTweak)))
    x.vstate = VState::proof_received;
}

void Simulation::on_vote_start(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  const SimTime now = queue_.now();
  if (x.vstate == VState::accepted) {
    // The poller never paid the rest: free the slot and remember it.
    sched_[x.voter.value].truncate(x.slot_start, now);
    adm_[slot(x.voter, x.au)].known().record(x.poller, Outcome::misbehaved, now);
    ++trace_.counters.proof_timeouts;
    x.vstate = VState::done;
    x.voter_active = false;
    maybe_release(xid);
    return;
  }
  if (x.vstate != VState::proof_received) return;
  charge(x.voter, EffortKind::verify, eff_.verify_remaining);
  charge(x.voter, EffortKind::hash, eff_.au_hash);
  charge(x.voter, EffortKind::construct, eff_.vote - eff_.au_hash);
  x.vstate = VState::voting;
  schedule_at(x.slot_end, Ev::vote_send, xid, x.gen);
}

void Simulation::on_vote_send(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.vstate != VState::voting) return;
  const std::size_t vs = slot(x.voter, x.au);
  x.vote_snapshot = replicas_[vs].snapshot();
  // Nominate part of the reference list.
  const auto& refs = refs_[vs];
  std::vector<PeerId> pool;
  pool.reserve(refs.size());
  for (PeerId p : refs)
    if (p != x.poller) pool.push_back(p);
  const auto k = std::min<std::size_t>(cfg_.nomination_cap,
                                       static_cast<std::size_t>(std::llround(cfg_.nomination_fraction * refs.size())));
  x.vote_identities = vote_rng_[x.voter.value].sample(std::span<const PeerId>(pool), k);
  x.remembered = mint_.receipt(x.nonce, cfg_.au_blocks);
  x.audit.voter_at_vote = eff_.voter_cost();
  x.vstate = VState::voted;
  send(x.voter, x.poller, vote_bytes(), Ev::vote_arrive, xid, x.gen);
  const SimTime now = queue_.now();
  schedule_at(std::max(now, x.poll_end) + receipt_grace_, Ev::receipt_deadline, xid, x.gen);
}

void Simulation::on_receipt(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.vstate != VState::voted) return;
  const bool ok = check_receipt(x.remembered, x.receipt);
  adm_[slot(x.voter, x.au)].known().record(x.poller, ok ? Outcome::receipt_ok : Outcome::misbehaved, queue_.now());
  x.vstate = VState::done;
  x.voter_active = false;
  maybe_release(xid);
}

void Simulation::on_receipt_deadline(std::uint32_t xid) {
  Exchange& x = xs_[xid];
  if (x.vstate != VState::voted) return;
  adm_[slot(x.voter, x.au)].known().record(x.poller, Outcome::receipt_missing, queue_.now());
  x.vstate = VState::done;
  x.voter_active = false;
  maybe_release(xid);
}

// ---- content

void Simulation::on_damage(std::uint32_t rs) {
  const PeerId p = peer_of(rs);
  RngStream& rng = damage_rng_[p.value];
  damage_.inject(replicas_[rs], queue_.now(), rng);
  const SimTime gap = damage_.next_gap(rng);
  if (gap != kNever && queue_.now() + gap < cfg_.horizon()) schedule_at(queue_.now() + gap, Ev::damage, rs, 0);
}

}  // namespace lockss
