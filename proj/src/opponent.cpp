#include "elenchus/opponent.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace elenchus {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error("MalformedResponse", what); }

AtomSet atoms_or_malformed(const json& obj, const char* field, bool required) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    if (required) malformed(std::string("missing '") + field + "'");
    return {};
  }
  try {
    return atoms_from_json(*it, field);
  } catch (const Error& e) {
    malformed(e.what());
  }
}

std::string string_or_malformed(const json& obj, const char* field, bool required) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    if (required) malformed(std::string("missing '") + field + "'");
    return {};
  }
  if (!it->is_string()) malformed(std::string("'") + field + "' must be a string");
  return it->get<std::string>();
}

const json& array_or_empty(const json& obj, const char* field) {
  static const json empty = json::array();
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return empty;
  if (!it->is_array()) malformed(std::string("'") + field + "' must be an array");
  return *it;
}

bool overlap(const AtomSet& a, const AtomSet& b) {
  return std::any_of(a.begin(), a.end(), [&](const AtomId& x) { return b.contains(x); });
}

// Tension shape check against a given position.
std::optional<std::string> tension_problem(const AtomSet& lhs, const AtomSet& rhs, const AtomSet& commitments,
                                           const AtomSet& denials) {
  if (lhs.empty() && rhs.empty()) return "both sides empty";
  if (overlap(lhs, rhs)) {
    if (lhs.size() != 1 || lhs != rhs) return "overlapping sides outside the A |- A form";
    const AtomId& a = *lhs.begin();
    if (!commitments.contains(a) && !denials.contains(a)) return a.name() + " is not in the position";
    return std::nullopt;
  }
  for (const auto& a : lhs)
    if (!commitments.contains(a)) return a.name() + " is not a commitment";
  for (const auto& a : rhs)
    if (!denials.contains(a)) return a.name() + " is not a denial";
  return std::nullopt;
}

}  // namespace

json proposal_to_json(const OpponentProposal& p) {
  json tensions = json::array();
  for (const auto& t : p.tensions) {
    json o = {{"lhs", atoms_to_json(t.lhs)}, {"rhs", atoms_to_json(t.rhs)}, {"rationale", t.rationale}};
    if (t.id) o["id"] = *t.id;
    tensions.push_back(std::move(o));
  }
  json challenges = json::array();
  for (const auto& c : p.challenges) {
    json o = {{"question", c.question}, {"targets", atoms_to_json(c.targets)}};
    if (c.id) o["id"] = *c.id;
    challenges.push_back(std::move(o));
  }
  json props = json::array();
  for (const auto& n : p.new_propositions)
    props.push_back({{"id", n.id.name()},
                     {"text", n.text},
                     {"suggestedSide", n.suggested_side == Side::Commit ? "commit" : "deny"}});
  return {{"tensions", std::move(tensions)}, {"challenges", std::move(challenges)}, {"newPropositions", std::move(props)}};
}

OpponentProposal proposal_from_json(const json& j) {
  if (!j.is_object()) malformed("proposal must be a JSON object");
  OpponentProposal p;
  for (const auto& t : array_or_empty(j, "tensions")) {
    if (!t.is_object()) malformed("tension entries must be objects");
    ProposedTension pt;
    if (auto id = string_or_malformed(t, "id", false); !id.empty()) pt.id = id;
    pt.lhs = atoms_or_malformed(t, "lhs", true);
    pt.rhs = atoms_or_malformed(t, "rhs", true);
    pt.rationale = string_or_malformed(t, "rationale", false);
    p.tensions.push_back(std::move(pt));
  }
  for (const auto& c : array_or_empty(j, "challenges")) {
    if (!c.is_object()) malformed("challenge entries must be objects");
    ProposedChallenge pc;
    if (auto id = string_or_malformed(c, "id", false); !id.empty()) pc.id = id;
    pc.question = string_or_malformed(c, "question", true);
    pc.targets = atoms_or_malformed(c, "targets", false);
    p.challenges.push_back(std::move(pc));
  }
  for (const auto& n : array_or_empty(j, "newPropositions")) {
    if (!n.is_object()) malformed("newPropositions entries must be objects");
    const std::string id = string_or_malformed(n, "id", true);
    if (!is_valid_atom_name(id)) malformed("invalid proposition id '" + id + "'");
    const std::string side = string_or_malformed(n, "suggestedSide", false);
    if (!side.empty() && side != "commit" && side != "deny") malformed("suggestedSide must be commit or deny");
    p.new_propositions.push_back(
        {AtomId(id), string_or_malformed(n, "text", true), side == "deny" ? Side::Deny : Side::Commit});
  }
  return p;
}

ScreenedProposal screen_proposal(const DialecticalState& state, const OpponentProposal& proposal) {
  ScreenedProposal out;
  AtomSet commitments = state.position.commitments;
  AtomSet denials = state.position.denials;

  AtomSet introduced;
  for (const auto& n : proposal.new_propositions) {
    const std::string item = "proposition " + n.id.name();
    if (state.propositions.contains(n.id)) {
      out.discarded.push_back({item, "id already used in this session"});
    } else if (introduced.contains(n.id)) {
      out.discarded.push_back({item, "proposed twice"});
    } else if (n.text.empty()) {
      out.discarded.push_back({item, "empty text"});
    } else {
      introduced.insert(n.id);
      (n.suggested_side == Side::Commit ? commitments : denials).insert(n.id);
      out.accepted.new_propositions.push_back(n);
    }
  }

  std::set<std::string> seen_ids;
  auto id_problem = [&](const std::optional<std::string>& id, bool tension) -> std::optional<std::string> {
    if (!id) return std::nullopt;
    if (id->empty()) return "empty id";
    const bool used = tension ? state.tension_id_used(*id) : state.challenges.contains(*id);
    if (used || seen_ids.contains(*id)) return "id " + *id + " already used";
    return std::nullopt;
  };

  for (std::size_t i = 0; i < proposal.tensions.size(); ++i) {
    const auto& t = proposal.tensions[i];
    const std::string item = "tension " + std::to_string(i);
    if (auto why = id_problem(t.id, true)) {
      out.discarded.push_back({item, *why});
    } else if (auto why2 = tension_problem(t.lhs, t.rhs, commitments, denials)) {
      out.discarded.push_back({item, *why2});
    } else {
      if (t.id) seen_ids.insert(*t.id);
      out.accepted.tensions.push_back(t);
    }
  }

  for (std::size_t i = 0; i < proposal.challenges.size(); ++i) {
    const auto& c = proposal.challenges[i];
    const std::string item = "challenge " + std::to_string(i);
    auto unresolved = std::find_if(c.targets.begin(), c.targets.end(),
                                   [&](const AtomId& a) { return !state.is_active(a); });
    if (auto why = id_problem(c.id, false)) {
      out.discarded.push_back({item, *why});
    } else if (c.question.empty()) {
      out.discarded.push_back({item, "empty question"});
    } else if (unresolved != c.targets.end()) {
      out.discarded.push_back({item, "target " + unresolved->name() + " is not an active proposition"});
    } else {
      if (c.id) seen_ids.insert(*c.id);
      out.accepted.challenges.push_back(c);
    }
  }
  return out;
}

RecordedProposal record_proposal(const DialecticalState& state, const ScreenedProposal& screened,
                                 const std::string& timestamp) {
  RecordedProposal out;
  std::uint64_t seq = state.last_seq;
  std::set<std::string> taken;

  auto fresh = [&](const std::optional<std::string>& wanted, const char* prefix, bool tension) {
    auto free = [&](const std::string& id) {
      const bool used = tension ? state.tension_id_used(id) : state.challenges.contains(id);
      return !used && !taken.contains(id);
    };
    std::string id = wanted && free(*wanted) ? *wanted : std::string(prefix) + std::to_string(seq);
    for (int n = 2; !free(id); ++n) id = std::string(prefix) + std::to_string(seq) + "-" + std::to_string(n);
    taken.insert(id);
    return id;
  };

  for (const auto& c : screened.accepted.challenges) {
    ++seq;
    out.events.push_back(DialecticEvent{seq, timestamp, Actor::Opponent,
                                        events::RaiseChallenge{fresh(c.id, "challenge-", false), c.question, c.targets}});
  }
  for (const auto& t : screened.accepted.tensions) {
    if (tension_problem(t.lhs, t.rhs, state.position.commitments, state.position.denials)) {
      out.deferred.push_back(t);
      continue;
    }
    ++seq;
    out.events.push_back(DialecticEvent{
        seq, timestamp, Actor::Opponent, events::ProposeTension{fresh(t.id, "tension-", true), t.lhs, t.rhs, t.rationale}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scripted adapter
// ---------------------------------------------------------------------------

ScriptedOracle::ScriptedOracle(std::vector<PropositionRecord> commitments,
                               std::map<std::uint64_t, OpponentProposal> entries)
    : commitments_(std::move(commitments)), entries_(std::move(entries)) {}

ScriptedOracle ScriptedOracle::from_json(const json& script) {
  std::vector<PropositionRecord> commitments;
  if (auto it = script.find("commitments"); it != script.end()) {
    if (!it->is_array()) throw Error("FormatError", "'commitments' must be an array");
    for (const auto& c : *it) {
      std::string id = require_string(c, "id");
      if (!is_valid_atom_name(id)) throw Error("FormatError", "invalid proposition id '" + id + "'");
      commitments.push_back({AtomId(std::move(id)), require_string(c, "text"), PropositionRecord::Status::Active});
    }
  }
  std::map<std::uint64_t, OpponentProposal> entries;
  const json& list = require_field(script, "entries");
  if (!list.is_array()) throw Error("FormatError", "'entries' must be an array");
  for (const auto& e : list) {
    const json& trigger = require_field(e, "trigger");
    if (!trigger.is_number_integer() || trigger.get<std::int64_t>() < 0) throw Error("FormatError", "'trigger' must be a non-negative integer");
    OpponentProposal p;
    try {
      p = proposal_from_json(require_field(e, "proposal"));
    } catch (const Error& err) {
      throw Error("FormatError", std::string("script entry: ") + err.what());
    }
    if (!entries.emplace(trigger.get<std::uint64_t>(), std::move(p)).second)
      throw Error("FormatError", "duplicate trigger " + trigger.dump());
  }
  return ScriptedOracle(std::move(commitments), std::move(entries));
}

ScriptedOracle ScriptedOracle::load(std::string_view document) {
  try {
    return from_json(json::parse(document));
  } catch (const json::parse_error& e) {
    throw Error("FormatError", std::string("malformed oracle script: ") + e.what());
  }
}

ScriptedOracle ScriptedOracle::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load(ss.str());
}

OpponentProposal ScriptedOracle::propose(const DialecticalState& state, std::span<const DialecticEvent>) {
  auto it = entries_.find(state.last_seq);
  return it == entries_.end() ? OpponentProposal{} : it->second;
}

std::vector<PropositionRecord> ScriptedOracle::extract_commitments(std::string_view source_text) {
  if (source_text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw Error("EmptyDocument", "source document is empty");
  return commitments_;
}

std::uint64_t ScriptedOracle::last_trigger() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

}  // namespace elenchus
