#include "lockss/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "lockss/simulation.hpp"

namespace lockss {

std::vector<Interval> attack_windows(const AdversaryConfig& cfg, SimTime horizon) {
  std::vector<Interval> out;
  if (cfg.kind == AttackKind::none) return out;
  const SimTime on = from_days(cfg.attack_days);
  const SimTime off = from_days(cfg.recuperation_days);
  if (on <= 0) return out;
  for (SimTime t = 0; t < horizon; t += on + off) out.push_back(Interval{t, std::min(horizon, t + on)});
  return out;
}

std::uint32_t targeted_count(const AdversaryConfig& cfg, std::uint32_t peers) {
  const double n = std::llround(std::clamp(cfg.coverage, 0.0, 1.0) * peers);
  return static_cast<std::uint32_t>(n);
}

SimTime next_admitted_garbage(SimTime now, SimTime refractory_end, double rate_per_day, double admit_prob,
                              RngStream& rng) {
  const double rate = rate_per_day * admit_prob;
  if (rate <= 0) return kNever;
  const SimTime from = std::max(now, refractory_end);
  const double gap_days = rng.exponential(rate);
  return from + std::max<SimTime>(1, static_cast<SimTime>(std::llround(gap_days * kDay)));
}

// ---- drivers

void Simulation::setup_adversary() {
  const auto& adv = cfg_.adversary;
  if (adv.kind == AttackKind::none) return;
  windows_ = attack_windows(adv, cfg_.horizon());
  const std::uint32_t n = cfg_.peers;
  const std::uint32_t k = targeted_count(adv, n);
  std::vector<PeerId> all;
  for (std::uint32_t p = 0; p < n; ++p) all.emplace_back(p);
  targeted_.clear();
  for (std::size_t w = 0; w < windows_.size(); ++w) {
    auto pick = adv_rng_.sample(std::span<const PeerId>(all), k);
    std::vector<std::uint8_t> mask(n, 0);
    for (PeerId p : pick) mask[p.value] = 1;
    targeted_.push_back(std::move(mask));
    if (adv.kind == AttackKind::pipe_stoppage) {
      if (!pick.empty()) net_.apply_stoppage(pick, windows_[w].start, windows_[w].length());
    } else {
      schedule_at(windows_[w].start, Ev::attack_window, static_cast<std::uint32_t>(w), 0);
    }
  }
}

bool Simulation::window_active(std::uint64_t window, SimTime now) const {
  return window < windows_.size() && windows_[window].contains(now);
}

void Simulation::on_attack_window(std::uint32_t w) {
  const SimTime now = queue_.now();
  const auto& adv = cfg_.adversary;
  for (std::uint32_t p = 0; p < cfg_.peers; ++p) {
    if (!targeted_[w][p]) continue;
    for (std::uint32_t au = 0; au < cfg_.aus_per_layer; ++au) {
      const auto target = static_cast<std::uint32_t>(slot(PeerId{p}, au));
      if (adv.kind == AttackKind::admission_flood) {
        const SimTime t = next_admitted_garbage(now, adm_[target].refractory_until(), adv.flood_rate_per_day,
                                                1.0 - cfg_.drop_unknown, adv_rng_);
        if (t < windows_[w].end) schedule_at(t, Ev::flood_arrival, target, w);
      } else if (adv.kind == AttackKind::brute_force) {
        schedule_at(now, Ev::brute_attempt, target, w);
      }
    }
  }
}

void Simulation::on_flood_arrival(std::uint32_t target, std::uint64_t w) {
  const SimTime now = queue_.now();
  if (!window_active(w, now)) return;
  const PeerId victim = peer_of(target);
  AdmissionControl& adm = adm_[target];
  // Garbage from a fresh identity only gets in when not in refractory.
  if (adm.admit_charity(now, adm_params_)) {
    ++trace_.counters.garbage_admitted;
    if (opts_.record_admissions) charity_log_.push_back(CharityAdmission{victim.value, au_of(target), now});
    // The victim sets up a session and finds the introductory effort bogus.
    charge(victim, EffortKind::session, eff_.session);
    charge(victim, EffortKind::verify, eff_.verify_intro);
  }
  const SimTime t = next_admitted_garbage(now, adm.refractory_until(), cfg_.adversary.flood_rate_per_day,
                                          1.0 - cfg_.drop_unknown, adv_rng_);
  if (t < windows_[w].end) schedule_at(t, Ev::flood_arrival, target, w);
}

void Simulation::on_brute_attempt(std::uint32_t target, std::uint64_t w) {
  const SimTime now = queue_.now();
  if (!window_active(w, now)) return;
  AdmissionControl& adm = adm_[target];
  if (adm.in_refractory(now)) {
    schedule_at(adm.refractory_until(), Ev::brute_attempt, target, w);
    return;
  }
  const PeerId victim = peer_of(target);
  const std::uint32_t au = au_of(target);
  const SimTime rem_d = eff_.duration(eff_.remaining);
  const SimTime proof_due = now + ack_wait_ + rem_d;
  const SimTime vote_due = proof_due + grace_ + vote_allowance_;
  const SimTime dur = eff_.duration(eff_.verify_remaining + eff_.vote);
  // Full knowledge of the victim's schedule: never waste an invitation on a
  // victim that would have to refuse.
  if (sched_[victim.value].free_slot_before(proof_due + grace_, dur, vote_due) == kNever) {
    schedule_at(now + kHour, Ev::brute_attempt, target, w);
    return;
  }
  const std::uint32_t minions = std::max<std::uint32_t>(1, cfg_.adversary.minions);
  for (;;) {
    const PeerId minion{cfg_.peers + next_minion_};
    next_minion_ = (next_minion_ + 1) % minions;
    charge(minion, EffortKind::construct, eff_.intro);
    ++trace_.counters.adversary_attempts;
    const AdmissionDecision d = adm.admit(minion, now, adm_params_, admit_rng_[victim.value]);
    if (d.result != Admission::admitted) continue;
    ++trace_.counters.adversary_admissions;
    if (d.charity && opts_.record_admissions) charity_log_.push_back(CharityAdmission{victim.value, au, now});
    charge(minion, EffortKind::session, eff_.session);
    const std::uint32_t xid = new_exchange();
    Exchange& x = xs_[xid];
    x.poller = minion;
    x.voter = victim;
    x.au = au;
    x.poll = kNoPoll;
    x.poller_active = true;
    x.pstate = PState::sent;
    x.proof_due = proof_due;
    x.vote_due = vote_due;
    x.poll_end = vote_due;
    x.nonce = adv_rng_.next();
    x.intro_proof = mint_.construct(mix(x.nonce, 1), eff_.intro);
    schedule_at(now + ack_wait_, Ev::ack_timeout, xid, x.gen);
    consider_admitted(xid);
    break;
  }
  schedule_at(std::max(now + 1, adm.refractory_until()), Ev::brute_attempt, target, w);
}

void Simulation::adversary_ack(Exchange& x, std::uint32_t xid, bool accept) {
  if (x.pstate != PState::sent) return;
  if (!accept || cfg_.adversary.defection == Defection::intro) {
    // Reservation attack: the victim holds the slot for nothing.
    x.pstate = PState::done;
    x.poller_active = false;
    maybe_release(xid);
    return;
  }
  charge(x.poller, EffortKind::construct, eff_.remaining);
  x.remaining_proof = mint_.construct(mix(x.nonce, 2), eff_.remaining);
  x.pstate = PState::proof_sent;
  send(x.poller, x.voter, cfg_.header_bytes, Ev::proof_arrive, xid, x.gen);
}

void Simulation::adversary_vote(Exchange& x, std::uint32_t xid) {
  if (x.pstate != PState::proof_sent) return;
  if (cfg_.adversary.defection == Defection::none) {
    // Full participation: evaluate the vote so the receipt is genuine.
    charge(x.poller, EffortKind::hash, eff_.au_hash);
    charge(x.poller, EffortKind::verify, eff_.evaluate_vote - eff_.au_hash);
    x.receipt = mint_.receipt(x.nonce, cfg_.au_blocks);
    send(x.poller, x.voter, cfg_.header_bytes, Ev::receipt_arrive, xid, x.gen);
  }
  x.pstate = PState::done;
  x.poller_active = false;
  maybe_release(xid);
}

}  // namespace lockss
