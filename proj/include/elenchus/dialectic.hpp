#pragma once

// The dialectical protocol as an event-sourced state machine. A session is an
// append-only log of DialecticEvents; the DialecticalState is the left fold of
// apply_event over that log. The material base of a state is its current
// bilateral language C ∪ D together with the accepted implications I.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "elenchus/base.hpp"

namespace elenchus {

enum class Actor { Respondent, Opponent };
enum class Side { Commit, Deny };

struct PropositionRecord {
  enum class Status { Active, Retracted };
  AtomId id;
  std::string text;
  Status status = Status::Active;

  bool active() const noexcept { return status == Status::Active; }
};

// Bilateral position [C : D]; C ∩ D = ∅ after every legal event.
struct Position {
  AtomSet commitments;
  AtomSet denials;
};

struct NewProposition {
  AtomId id;
  std::string text;
  Side side = Side::Commit;
};

struct EndorsedSequent {
  AtomSet lhs;
  AtomSet rhs;
  friend bool operator==(const EndorsedSequent&, const EndorsedSequent&) = default;
};

struct Resolution {
  enum class Kind { Retract, Refine };
  Kind kind = Kind::Retract;
  AtomSet retracted;
  std::optional<NewProposition> added;     // required for Refine
  std::optional<EndorsedSequent> endorsed;  // defaults to the tension's own sequent
};

// The four shapes a tension can take.
enum class TensionType {
  Consistency,     // A |- A
  Contrariety,     // G |-       (rhs empty)
  Subcontrariety,  //   |- D     (lhs empty)
  CrossSide,       // G |- D
};

struct Tension {
  enum class Status { Open, Accepted, Contested };
  std::string id;
  AtomSet lhs;
  AtomSet rhs;
  std::string rationale;
  Status status = Status::Open;
  std::optional<Resolution> resolution;

  TensionType type() const;
};

struct Challenge {
  enum class Status { Open, Resolved };
  std::string id;
  std::string question;
  AtomSet targets;
  Status status = Status::Open;
  std::string note;
};

namespace events {
struct Commit { AtomId id; std::string text; };
struct Deny { AtomId id; std::string text; };
struct Retract { AtomId id; };
struct ProposeTension { std::string id; AtomSet lhs; AtomSet rhs; std::string rationale; };
struct AcceptTension { std::string id; Resolution resolution; };
struct ContestTension { std::string id; };
struct RaiseChallenge { std::string id; std::string question; AtomSet targets; };
struct ResolveChallenge { std::string id; std::string note; };
}  // namespace events

using EventBody = std::variant<events::Commit, events::Deny, events::Retract, events::ProposeTension,
                               events::AcceptTension, events::ContestTension, events::RaiseChallenge,
                               events::ResolveChallenge>;

// "commit", "deny", "retract", "propose_tension", "accept_tension",
// "contest_tension", "raise_challenge", "resolve_challenge".
std::string event_kind_name(const EventBody& body);

struct DialecticEvent {
  std::uint64_t seq = 0;  // contiguous from 1
  std::string timestamp;
  Actor actor = Actor::Respondent;
  EventBody body;
};

// An implication removed from I because one of its atoms left the language.
struct PrunedImplication {
  AtomicImplication implication;
  AtomId retracted;
  std::uint64_t seq = 0;  // event that pruned it
};

struct DialecticalState {
  std::map<AtomId, PropositionRecord> propositions;
  Position position;
  std::map<std::string, Tension> open_tensions;
  std::map<std::string, Tension> closed_tensions;   // accepted or contested
  std::set<std::string> dropped_tensions;           // emptied by retraction while open
  std::vector<AtomicImplication> implications;      // I, sorted; provenance = tension id
  std::map<std::string, Challenge> challenges;
  std::vector<PrunedImplication> pruned;
  std::uint64_t last_seq = 0;

  bool is_active(const AtomId& a) const;
  bool tension_id_used(const std::string& id) const;
  std::vector<const Challenge*> open_challenges() const;
};

// Applies one event. Throws Error with one of: SequenceGap, ActorViolation,
// BilateralViolation, DuplicateAtomId, UnknownAtom, NotActive, InvalidProposition,
// DuplicateTensionId, InvalidTension, UnknownTension, DoubleResolution,
// StaleTension, InvalidResolution, DuplicateChallengeId, UnknownChallenge.
// On error the input state is left unchanged.
void apply_event_in_place(DialecticalState& state, const DialecticEvent& event);
DialecticalState apply_event(DialecticalState state, const DialecticEvent& event);

// Left fold from the empty state. The first illegal event aborts with an
// EventError carrying its index and the underlying code.
DialecticalState replay(const std::vector<DialecticEvent>& log);

// L = C ∪ D, I as accepted; open tensions are excluded.
MaterialBase extract_base(const DialecticalState& state);

}  // namespace elenchus
