#include "elenchus/dialectic.hpp"

#include <algorithm>

namespace elenchus {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void raise(const char* code, const std::string& message) { throw Error(code, message); }

bool intersects(const AtomSet& a, const AtomSet& b) {
  return std::any_of(a.begin(), a.end(), [&](const AtomId& x) { return b.contains(x); });
}

bool subset(const AtomSet& a, const AtomSet& b) {
  return std::all_of(a.begin(), a.end(), [&](const AtomId& x) { return b.contains(x); });
}

bool mentions(const AtomicImplication& imp, const AtomId& a) { return imp.lhs.contains(a) || imp.rhs.contains(a); }

void require_actor(const DialecticEvent& e, Actor expected) {
  if (e.actor != expected)
    raise("ActorViolation", event_kind_name(e.body) + " must be issued by the " +
                                (expected == Actor::Respondent ? "respondent" : "opponent"));
}

// The only overlapping tension shape is the consistency tension {a} |- {a}.
bool legal_shape(const AtomSet& lhs, const AtomSet& rhs) {
  if (lhs.empty() && rhs.empty()) return false;
  if (intersects(lhs, rhs)) return lhs.size() == 1 && lhs == rhs;
  return true;
}

void require_active(const DialecticalState& s, const AtomId& a) {
  auto it = s.propositions.find(a);
  if (it == s.propositions.end()) raise("UnknownAtom", "no proposition " + a.name());
  if (!it->second.active()) raise("NotActive", "proposition " + a.name() + " has been retracted");
}

// Retraction bookkeeping shared by Retract and retracting resolutions.
void retract_atom(DialecticalState& s, const AtomId& a, std::uint64_t seq) {
  s.propositions.at(a).status = PropositionRecord::Status::Retracted;
  s.position.commitments.erase(a);
  s.position.denials.erase(a);

  for (auto it = s.open_tensions.begin(); it != s.open_tensions.end();) {
    Tension& t = it->second;
    t.lhs.erase(a);
    t.rhs.erase(a);
    if (!legal_shape(t.lhs, t.rhs)) {
      s.dropped_tensions.insert(it->first);
      it = s.open_tensions.erase(it);
    } else {
      ++it;
    }
  }

  auto& imps = s.implications;
  for (auto it = imps.begin(); it != imps.end();) {
    if (mentions(*it, a)) {
      s.pruned.push_back({*it, a, seq});
      it = imps.erase(it);
    } else {
      ++it;
    }
  }
}

void add_proposition(DialecticalState& s, const AtomId& id, const std::string& text, Side side) {
  s.propositions.emplace(id, PropositionRecord{id, text, PropositionRecord::Status::Active});
  (side == Side::Commit ? s.position.commitments : s.position.denials).insert(id);
}

void check_new_proposition(const DialecticalState& s, const AtomId& id, const std::string& text, Side side) {
  auto it = s.propositions.find(id);
  if (it != s.propositions.end()) {
    const AtomSet& opposite = side == Side::Commit ? s.position.denials : s.position.commitments;
    if (opposite.contains(id))
      raise("BilateralViolation", id.name() + (side == Side::Commit ? " is denied" : " is committed") +
                                      "; a proposition cannot be both committed and denied");
    raise("DuplicateAtomId", "proposition " + id.name() + " already exists");
  }
  if (text.empty()) raise("InvalidProposition", "proposition " + id.name() + " has empty text");
}

void insert_implication(DialecticalState& s, AtomicImplication imp) {
  auto it = std::lower_bound(s.implications.begin(), s.implications.end(), imp);
  if (it != s.implications.end() && *it == imp) return;  // already endorsed earlier
  s.implications.insert(it, std::move(imp));
}

const Tension& find_open_tension(const DialecticalState& s, const std::string& id) {
  if (auto it = s.open_tensions.find(id); it != s.open_tensions.end()) return it->second;
  if (s.closed_tensions.contains(id)) raise("DoubleResolution", "tension " + id + " is already resolved");
  if (s.dropped_tensions.contains(id))
    raise("StaleTension", "tension " + id + " was dropped after its atoms were retracted");
  raise("UnknownTension", "no tension " + id);
}

void apply_accept(DialecticalState& s, const DialecticEvent& e, const events::AcceptTension& ev) {
  require_actor(e, Actor::Respondent);
  const Tension& open = find_open_tension(s, ev.id);
  const Resolution& r = ev.resolution;

  // Validate everything before mutating.
  for (const auto& a : r.retracted) {
    require_active(s, a);
    if (!open.lhs.contains(a) && !open.rhs.contains(a))
      raise("InvalidResolution", "retracted " + a.name() + " is not part of tension " + ev.id);
  }
  if (r.kind == Resolution::Kind::Retract) {
    if (r.retracted.empty()) raise("InvalidResolution", "a retraction must retract at least one proposition");
    if (r.added) raise("InvalidResolution", "a retraction does not add propositions; use refine");
  } else if (!r.added) {
    raise("InvalidResolution", "a refinement must add a proposition");
  }
  if (r.added) check_new_proposition(s, r.added->id, r.added->text, r.added->side);
  if (r.endorsed) {
    if (r.endorsed->lhs.empty() && r.endorsed->rhs.empty())
      raise("InvalidResolution", "the endorsed sequent is empty");
    auto live = [&](const AtomId& a) {
      if (r.added && r.added->id == a) return true;
      return s.is_active(a) && !r.retracted.contains(a);
    };
    for (const auto* side : {&r.endorsed->lhs, &r.endorsed->rhs})
      for (const auto& a : *side)
        if (!live(a)) raise("StaleTension", "endorsed sequent mentions " + a.name() + ", which is not active");
  }

  Tension t = open;
  s.open_tensions.erase(ev.id);
  t.status = Tension::Status::Accepted;
  t.resolution = r;

  for (const auto& a : r.retracted) retract_atom(s, a, e.seq);
  if (r.added) add_proposition(s, r.added->id, r.added->text, r.added->side);

  AtomicImplication imp;
  if (r.endorsed) {
    imp.lhs = r.endorsed->lhs;
    imp.rhs = r.endorsed->rhs;
  } else {
    imp.lhs = t.lhs;
    imp.rhs = t.rhs;
  }
  imp.provenance = t.id;

  // A default sequent naming a just-retracted atom cannot enter I over the
  // current language; it is recorded as pruned, like any other retraction.
  auto dead = std::find_if(r.retracted.begin(), r.retracted.end(), [&](const AtomId& a) { return mentions(imp, a); });
  if (dead != r.retracted.end())
    s.pruned.push_back({std::move(imp), *dead, e.seq});
  else
    insert_implication(s, std::move(imp));

  s.closed_tensions.emplace(t.id, std::move(t));
}

}  // namespace

TensionType Tension::type() const {
  if (intersects(lhs, rhs)) return TensionType::Consistency;
  if (rhs.empty()) return TensionType::Contrariety;
  if (lhs.empty()) return TensionType::Subcontrariety;
  return TensionType::CrossSide;
}

bool DialecticalState::is_active(const AtomId& a) const {
  auto it = propositions.find(a);
  return it != propositions.end() && it->second.active();
}

bool DialecticalState::tension_id_used(const std::string& id) const {
  return open_tensions.contains(id) || closed_tensions.contains(id) || dropped_tensions.contains(id);
}

std::vector<const Challenge*> DialecticalState::open_challenges() const {
  std::vector<const Challenge*> out;
  for (const auto& [id, c] : challenges)
    if (c.status == Challenge::Status::Open) out.push_back(&c);
  return out;
}

std::string event_kind_name(const EventBody& body) {
  return std::visit(overloaded{
                        [](const events::Commit&) { return "commit"; },
                        [](const events::Deny&) { return "deny"; },
                        [](const events::Retract&) { return "retract"; },
                        [](const events::ProposeTension&) { return "propose_tension"; },
                        [](const events::AcceptTension&) { return "accept_tension"; },
                        [](const events::ContestTension&) { return "contest_tension"; },
                        [](const events::RaiseChallenge&) { return "raise_challenge"; },
                        [](const events::ResolveChallenge&) { return "resolve_challenge"; },
                    },
                    body);
}

void apply_event_in_place(DialecticalState& s, const DialecticEvent& e) {
  if (e.seq != s.last_seq + 1)
    raise("SequenceGap", "expected sequence number " + std::to_string(s.last_seq + 1) + ", got " +
                             std::to_string(e.seq));

  std::visit(
      overloaded{
          [&](const events::Commit& ev) {
            require_actor(e, Actor::Respondent);
            check_new_proposition(s, ev.id, ev.text, Side::Commit);
            add_proposition(s, ev.id, ev.text, Side::Commit);
          },
          [&](const events::Deny& ev) {
            require_actor(e, Actor::Respondent);
            check_new_proposition(s, ev.id, ev.text, Side::Deny);
            add_proposition(s, ev.id, ev.text, Side::Deny);
          },
          [&](const events::Retract& ev) {
            require_actor(e, Actor::Respondent);
            require_active(s, ev.id);
            retract_atom(s, ev.id, e.seq);
          },
          [&](const events::ProposeTension& ev) {
            require_actor(e, Actor::Opponent);
            if (ev.id.empty()) raise("InvalidTension", "tension id is empty");
            if (s.tension_id_used(ev.id)) raise("DuplicateTensionId", "tension id " + ev.id + " already used");
            for (const auto* side : {&ev.lhs, &ev.rhs})
              for (const auto& a : *side) require_active(s, a);
            if (!legal_shape(ev.lhs, ev.rhs)) raise("InvalidTension", "tension " + ev.id + " has an illegal shape");
            const bool consistency = intersects(ev.lhs, ev.rhs);
            if (!consistency && (!subset(ev.lhs, s.position.commitments) || !subset(ev.rhs, s.position.denials)))
              raise("InvalidTension", "tension " + ev.id + " must take its antecedent from commitments and its "
                                      "succedent from denials");
            s.open_tensions.emplace(ev.id, Tension{ev.id, ev.lhs, ev.rhs, ev.rationale, Tension::Status::Open, {}});
          },
          [&](const events::AcceptTension& ev) { apply_accept(s, e, ev); },
          [&](const events::ContestTension& ev) {
            require_actor(e, Actor::Respondent);
            Tension t = find_open_tension(s, ev.id);
            s.open_tensions.erase(ev.id);
            t.status = Tension::Status::Contested;
            s.closed_tensions.emplace(t.id, std::move(t));
          },
          [&](const events::RaiseChallenge& ev) {
            require_actor(e, Actor::Opponent);
            if (ev.id.empty()) raise("InvalidChallenge", "challenge id is empty");
            if (s.challenges.contains(ev.id)) raise("DuplicateChallengeId", "challenge id " + ev.id + " already used");
            if (ev.question.empty()) raise("InvalidChallenge", "challenge " + ev.id + " has no question");
            for (const auto& a : ev.targets) require_active(s, a);
            s.challenges.emplace(ev.id, Challenge{ev.id, ev.question, ev.targets, Challenge::Status::Open, {}});
          },
          [&](const events::ResolveChallenge& ev) {
            auto it = s.challenges.find(ev.id);
            if (it == s.challenges.end()) raise("UnknownChallenge", "no challenge " + ev.id);
            if (it->second.status == Challenge::Status::Resolved)
              raise("DoubleResolution", "challenge " + ev.id + " is already resolved");
            it->second.status = Challenge::Status::Resolved;
            it->second.note = ev.note;
          },
      },
      e.body);
  s.last_seq = e.seq;
}

DialecticalState apply_event(DialecticalState state, const DialecticEvent& event) {
  apply_event_in_place(state, event);
  return state;
}

DialecticalState replay(const std::vector<DialecticEvent>& log) {
  DialecticalState state;
  for (std::size_t i = 0; i < log.size(); ++i) {
    try {
      apply_event_in_place(state, log[i]);
    } catch (const Error& err) {
      throw EventError(err, i);
    }
  }
  return state;
}

MaterialBase extract_base(const DialecticalState& state) {
  AtomSet atoms = state.position.commitments;
  atoms.insert(state.position.denials.begin(), state.position.denials.end());
  return MaterialBase(std::move(atoms), state.implications);
}

}  // namespace elenchus
