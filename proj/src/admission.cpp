#include "lockss/admission.hpp"

#include <algorithm>

namespace lockss {

std::string_view grade_name(Grade g) {
  switch (g) {
    case Grade::unknown: return "unknown";
    case Grade::debt: return "debt";
    case Grade::even: return "even";
    case Grade::credit: return "credit";
  }
  return "unknown";
}

std::optional<Grade> parse_grade(std::string_view s) {
  for (Grade g : {Grade::unknown, Grade::debt, Grade::even, Grade::credit}) {
    if (grade_name(g) == s) return g;
  }
  return std::nullopt;
}

Grade raised(Grade g) {
  switch (g) {
    case Grade::unknown:
    case Grade::debt: return Grade::even;
    default: return Grade::credit;
  }
}

Grade lowered(Grade g) { return g == Grade::credit ? Grade::even : Grade::debt; }

Grade decayed(Grade g, std::int64_t steps) {
  if (g == Grade::unknown || steps <= 0) return g;
  const auto v = std::max<std::int64_t>(static_cast<std::int64_t>(Grade::debt), static_cast<std::int64_t>(g) - steps);
  return static_cast<Grade>(v);
}

Grade KnownPeers::grade(PeerId p, SimTime now) const {
  if (p.value >= entries_.size()) return Grade::unknown;
  const Entry& e = entries_[p.value];
  if (e.grade <= Grade::debt || decay_ <= 0) return e.grade;
  return decayed(e.grade, (now - e.updated) / decay_);
}

void KnownPeers::set(PeerId p, Grade g, SimTime now) {
  if (p.value >= entries_.size()) return;
  entries_[p.value] = Entry{g, now};
}

void KnownPeers::record(PeerId p, Outcome outcome, SimTime now) {
  const Grade cur = grade(p, now);
  switch (outcome) {
    case Outcome::vote_supplied_ok: set(p, raised(cur), now); break;
    case Outcome::receipt_ok: set(p, lowered(cur), now); break;
    case Outcome::misbehaved:
    case Outcome::receipt_missing: set(p, Grade::debt, now); break;
  }
}

void KnownPeers::decay_all(SimTime now) {
  if (decay_ <= 0) return;
  for (Entry& e : entries_) {
    if (e.grade <= Grade::debt) continue;
    const std::int64_t steps = (now - e.updated) / decay_;
    if (steps > 0) {
      e.grade = decayed(e.grade, steps);
      e.updated += steps * decay_;
    }
  }
}

void IntroductionDirectory::register_introductions(PeerId introducer, std::span<const PeerId> introducees) {
  remove_introducer(introducer);
  std::size_t added = 0;
  for (PeerId b : introducees) {
    if (added >= cap_) break;
    if (b == introducer) continue;
    const bool dup = std::any_of(entries_.begin(), entries_.end(),
                                 [&](const Entry& e) { return e.introducer == introducer && e.introducee == b; });
    if (dup) continue;
    entries_.push_back(Entry{introducer, b});
    ++added;
  }
}

std::optional<PeerId> IntroductionDirectory::consume(PeerId introducee) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.introducee == introducee; });
  if (it == entries_.end()) return std::nullopt;
  const PeerId a = it->introducer;
  std::erase_if(entries_, [&](const Entry& e) { return e.introducer == a || e.introducee == introducee; });
  return a;
}

void IntroductionDirectory::remove_introducer(PeerId introducer) {
  std::erase_if(entries_, [&](const Entry& e) { return e.introducer == introducer; });
}

bool IntroductionDirectory::introduced(PeerId introducee) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.introducee == introducee; });
}

std::size_t IntroductionDirectory::outstanding_by(PeerId introducer) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.introducer == introducer; }));
}

AdmissionDecision AdmissionControl::admit(PeerId poller, SimTime now, const AdmissionParams& p, RngStream& rng) {
  const Grade g = known_.grade(poller, now);
  if (g == Grade::even || g == Grade::credit) return {Admission::admitted, false, std::nullopt};
  if (auto by = intros_.consume(poller)) return {Admission::admitted, false, by};
  if (in_refractory(now)) return {Admission::refractory_reject, false, std::nullopt};
  const double drop = g == Grade::unknown ? p.drop_unknown : p.drop_debt;
  if (rng.bernoulli(drop)) return {Admission::dropped, false, std::nullopt};
  refractory_until_ = now + p.refractory;
  return {Admission::admitted, true, std::nullopt};
}

bool AdmissionControl::admit_charity(SimTime now, const AdmissionParams& p) {
  if (in_refractory(now)) return false;
  refractory_until_ = now + p.refractory;
  return true;
}

}  // namespace lockss
