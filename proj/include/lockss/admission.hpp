#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lockss/rng.hpp"
#include "lockss/types.hpp"

namespace lockss {

// `unknown` is the implicit grade of a peer with no entry.
enum class Grade : std::uint8_t { unknown = 0, debt = 1, even = 2, credit = 3 };

std::string_view grade_name(Grade g);
std::optional<Grade> parse_grade(std::string_view s);

// One step up: unknown and debt become even, even becomes credit.
Grade raised(Grade g);
// One step down: unknown and even become debt, credit becomes even.
Grade lowered(Grade g);
// `steps` decay steps toward debt; unknown stays unknown.
Grade decayed(Grade g, std::int64_t steps);

enum class Outcome : std::uint8_t { vote_supplied_ok, receipt_ok, misbehaved, receipt_missing };

// First-hand grades one peer keeps about others, for one AU. Dense over the
// id space the run knows about; decay is applied lazily on lookup.
class KnownPeers {
 public:
  KnownPeers() = default;
  KnownPeers(std::size_t id_space, SimTime decay_interval) : entries_(id_space), decay_(decay_interval) {}

  std::size_t id_space() const { return entries_.size(); }

  Grade grade(PeerId p, SimTime now) const;
  void set(PeerId p, Grade g, SimTime now);

  // Applies the transition for `outcome` observed about `p`:
  // vote_supplied_ok raises, receipt_ok lowers, the rest force debt.
  void record(PeerId p, Outcome outcome, SimTime now);

  // Materializes decay for all entries (the lazy lookup gives the same answer).
  void decay_all(SimTime now);

 private:
  struct Entry {
    Grade grade = Grade::unknown;
    SimTime updated = 0;
  };
  std::vector<Entry> entries_;
  SimTime decay_ = 90 * kDay;
};

// Introductions kept by one peer for one AU.
class IntroductionDirectory {
 public:
  explicit IntroductionDirectory(std::size_t cap_per_introducer = 3) : cap_(cap_per_introducer) {}

  // Replaces everything `introducer` had outstanding with (up to cap of)
  // `introducees`. Self-introductions and duplicates are skipped.
  void register_introductions(PeerId introducer, std::span<const PeerId> introducees);

  // Consumes one live introduction of `introducee`. On success every other
  // introduction by the same introducer and every introduction of the same
  // introducee are forgotten. Returns the introducer.
  std::optional<PeerId> consume(PeerId introducee);

  void remove_introducer(PeerId introducer);

  bool introduced(PeerId introducee) const;
  std::size_t outstanding() const { return entries_.size(); }
  std::size_t outstanding_by(PeerId introducer) const;

 private:
  struct Entry {
    PeerId introducer;
    PeerId introducee;
  };
  std::vector<Entry> entries_;
  std::size_t cap_;
};

enum class Admission : std::uint8_t { admitted, dropped, refractory_reject };

struct AdmissionParams {
  double drop_unknown = 0.90;
  double drop_debt = 0.80;
  SimTime refractory = kDay;
};

struct AdmissionDecision {
  Admission result = Admission::dropped;
  bool charity = false;                 // admitted from unknown or debt
  std::optional<PeerId> introducer;     // set when an introduction was consumed
};

// Admission filter of one peer for one AU.
class AdmissionControl {
 public:
  AdmissionControl() = default;
  AdmissionControl(std::size_t id_space, SimTime decay_interval, std::size_t intro_cap)
      : known_(id_space, decay_interval), intros_(intro_cap) {}

  AdmissionDecision admit(PeerId poller, SimTime now, const AdmissionParams& p, RngStream& rng);

  // Admission of an invitation already known to have passed the random drop
  // (used by thinned arrival processes). Fails only on refractory.
  bool admit_charity(SimTime now, const AdmissionParams& p);

  bool in_refractory(SimTime now) const { return now < refractory_until_; }
  SimTime refractory_until() const { return refractory_until_; }

  KnownPeers& known() { return known_; }
  const KnownPeers& known() const { return known_; }
  IntroductionDirectory& intros() { return intros_; }
  const IntroductionDirectory& intros() const { return intros_; }

 private:
  KnownPeers known_;
  IntroductionDirectory intros_;
  SimTime refractory_until_ = 0;
};

}  // namespace lockss
