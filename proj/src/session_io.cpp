#include "elenchus/session_io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace elenchus {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

AtomId atom_field(const json& j, const char* field) {
  std::string name = require_string(j, field);
  if (!is_valid_atom_name(name)) throw Error("FormatError", std::string("field '") + field + "' is not a valid atom id");
  return AtomId(std::move(name));
}

std::string optional_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error("FormatError", std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::string side_name(Side s) { return s == Side::Commit ? "commit" : "deny"; }

Side side_from_name(const std::string& s) {
  if (s == "commit") return Side::Commit;
  if (s == "deny") return Side::Deny;
  throw Error("FormatError", "side must be 'commit' or 'deny', got '" + s + "'");
}

json resolution_to_json(const Resolution& r) {
  json o = json::object();
  o["kind"] = r.kind == Resolution::Kind::Retract ? "retract" : "refine";
  o["retracted"] = atoms_to_json(r.retracted);
  if (r.added) o["added"] = {{"id", r.added->id.name()}, {"text", r.added->text}, {"side", side_name(r.added->side)}};
  if (r.endorsed) o["endorsed"] = {{"lhs", atoms_to_json(r.endorsed->lhs)}, {"rhs", atoms_to_json(r.endorsed->rhs)}};
  return o;
}

Resolution resolution_from_json(const json& j) {
  Resolution r;
  const std::string kind = require_string(j, "kind");
  if (kind == "retract")
    r.kind = Resolution::Kind::Retract;
  else if (kind == "refine")
    r.kind = Resolution::Kind::Refine;
  else
    throw Error("FormatError", "resolution kind must be 'retract' or 'refine', got '" + kind + "'");
  if (auto it = j.find("retracted"); it != j.end()) r.retracted = atoms_from_json(*it, "retracted");
  if (auto it = j.find("added"); it != j.end() && !it->is_null())
    r.added = NewProposition{atom_field(*it, "id"), require_string(*it, "text"),
                             side_from_name(it->contains("side") ? require_string(*it, "side") : "commit")};
  if (auto it = j.find("endorsed"); it != j.end() && !it->is_null())
    r.endorsed = EndorsedSequent{atoms_from_json(require_field(*it, "lhs"), "lhs"),
                                 atoms_from_json(require_field(*it, "rhs"), "rhs")};
  return r;
}

}  // namespace

std::string actor_name(Actor a) { return a == Actor::Respondent ? "respondent" : "opponent"; }

Actor actor_from_name(const std::string& name) {
  if (name == "respondent") return Actor::Respondent;
  if (name == "opponent") return Actor::Opponent;
  throw Error("FormatError", "actor must be 'respondent' or 'opponent', got '" + name + "'");
}

json event_to_json(const DialecticEvent& e) {
  json o = json::object();
  o["seq"] = e.seq;
  o["timestamp"] = e.timestamp;
  o["actor"] = actor_name(e.actor);
  o["kind"] = event_kind_name(e.body);
  std::visit(overloaded{
                 [&](const events::Commit& ev) {
                   o["id"] = ev.id.name();
                   o["text"] = ev.text;
                 },
                 [&](const events::Deny& ev) {
                   o["id"] = ev.id.name();
                   o["text"] = ev.text;
                 },
                 [&](const events::Retract& ev) { o["id"] = ev.id.name(); },
                 [&](const events::ProposeTension& ev) {
                   o["id"] = ev.id;
                   o["lhs"] = atoms_to_json(ev.lhs);
                   o["rhs"] = atoms_to_json(ev.rhs);
                   o["rationale"] = ev.rationale;
                 },
                 [&](const events::AcceptTension& ev) {
                   o["id"] = ev.id;
                   o["resolution"] = resolution_to_json(ev.resolution);
                 },
                 [&](const events::ContestTension& ev) { o["id"] = ev.id; },
                 [&](const events::RaiseChallenge& ev) {
                   o["id"] = ev.id;
                   o["question"] = ev.question;
                   o["targets"] = atoms_to_json(ev.targets);
                 },
                 [&](const events::ResolveChallenge& ev) {
                   o["id"] = ev.id;
                   o["note"] = ev.note;
                 },
             },
             e.body);
  return o;
}

DialecticEvent event_from_json(const json& j, bool require_seq) {
  if (!j.is_object()) throw Error("FormatError", "event must be a JSON object");
  std::uint64_t seq = 0;
  if (auto it = j.find("seq"); it != j.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw Error("FormatError", "field 'seq' must be a non-negative integer");
    seq = it->get<std::uint64_t>();
  } else if (require_seq) {
    throw Error("FormatError", "missing field 'seq'");
  }
  const std::string timestamp = optional_string(j, "timestamp");
  const Actor actor = actor_from_name(require_string(j, "actor"));
  const std::string kind = require_string(j, "kind");

  auto body = [&]() -> EventBody {
    if (kind == "commit") return events::Commit{atom_field(j, "id"), require_string(j, "text")};
    if (kind == "deny") return events::Deny{atom_field(j, "id"), require_string(j, "text")};
    if (kind == "retract") return events::Retract{atom_field(j, "id")};
    if (kind == "propose_tension")
      return events::ProposeTension{require_string(j, "id"), atoms_from_json(require_field(j, "lhs"), "lhs"),
                                    atoms_from_json(require_field(j, "rhs"), "rhs"), optional_string(j, "rationale")};
    if (kind == "accept_tension")
      return events::AcceptTension{require_string(j, "id"), resolution_from_json(require_field(j, "resolution"))};
    if (kind == "contest_tension") return events::ContestTension{require_string(j, "id")};
    if (kind == "raise_challenge") {
      AtomSet targets;
      if (auto it = j.find("targets"); it != j.end()) targets = atoms_from_json(*it, "targets");
      return events::RaiseChallenge{require_string(j, "id"), require_string(j, "question"), std::move(targets)};
    }
    if (kind == "resolve_challenge") return events::ResolveChallenge{require_string(j, "id"), optional_string(j, "note")};
    throw Error("FormatError", "unknown event kind '" + kind + "'");
  };
  return DialecticEvent{seq, timestamp, actor, body()};
}

json session_to_json(const SessionDocument& doc) {
  json events = json::array();
  for (const auto& e : doc.events) events.push_back(event_to_json(e));
  return {{"session", doc.session}, {"events", std::move(events)}};
}

SessionDocument session_from_json(const json& j) {
  SessionDocument doc;
  doc.session = require_string(j, "session");
  const json& events = require_field(j, "events");
  if (!events.is_array()) throw Error("FormatError", "field 'events' must be an array");
  for (const auto& e : events) doc.events.push_back(event_from_json(e));
  return doc;
}

SessionDocument load_session(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error("FormatError", std::string("malformed session document: ") + e.what());
  }
  return session_from_json(j);
}

std::string save_session(const SessionDocument& doc) { return session_to_json(doc).dump(2) + "\n"; }

SessionDocument load_session_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_session(ss.str());
}

void save_session_file(const SessionDocument& doc, const std::string& path) {
  const std::string tmp = path + ".tmp";
  const std::string bytes = save_session(doc);
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error("IOError", "cannot write " + tmp);
  std::size_t written = 0;
  while (written < bytes.size()) {
    ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (n <= 0) {
      ::close(fd);
      throw Error("IOError", "short write to " + tmp);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw Error("IOError", "cannot flush " + tmp);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("IOError", "cannot rename " + tmp + " to " + path);
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

namespace {

const char* tension_status_name(Tension::Status s) {
  switch (s) {
    case Tension::Status::Open: return "open";
    case Tension::Status::Accepted: return "accepted";
    case Tension::Status::Contested: return "contested";
  }
  return "?";
}

const char* tension_type_name(TensionType t) {
  switch (t) {
    case TensionType::Consistency: return "consistency";
    case TensionType::Contrariety: return "contrariety";
    case TensionType::Subcontrariety: return "subcontrariety";
    case TensionType::CrossSide: return "cross-side";
  }
  return "?";
}

json implication_to_json(const AtomicImplication& imp) {
  return {{"lhs", atoms_to_json(imp.lhs)},
          {"rhs", atoms_to_json(imp.rhs)},
          {"provenance", imp.provenance},
          {"sequent", imp.text()},
          {"redundant", imp.redundant()}};
}

}  // namespace

json tension_to_json(const Tension& t) {
  json o = {{"id", t.id},
            {"lhs", atoms_to_json(t.lhs)},
            {"rhs", atoms_to_json(t.rhs)},
            {"sequent", atomic_sequent(t.lhs, t.rhs).text()},
            {"type", tension_type_name(t.type())},
            {"rationale", t.rationale},
            {"status", tension_status_name(t.status)}};
  if (t.resolution) o["resolution"] = resolution_to_json(*t.resolution);
  return o;
}

json challenge_to_json(const Challenge& c) {
  return {{"id", c.id},
          {"question", c.question},
          {"targets", atoms_to_json(c.targets)},
          {"status", c.status == Challenge::Status::Open ? "open" : "resolved"},
          {"note", c.note}};
}

json state_to_json(const DialecticalState& s) {
  json props = json::array();
  for (const auto& [id, p] : s.propositions) {
    std::string side = s.position.commitments.contains(id) ? "commitment"
                       : s.position.denials.contains(id)   ? "denial"
                                                           : "none";
    props.push_back({{"id", id.name()},
                     {"text", p.text},
                     {"status", p.active() ? "active" : "retracted"},
                     {"side", side}});
  }
  json open = json::array();
  for (const auto& [id, t] : s.open_tensions) open.push_back(tension_to_json(t));
  json closed = json::array();
  for (const auto& [id, t] : s.closed_tensions) closed.push_back(tension_to_json(t));
  json imps = json::array();
  for (const auto& imp : s.implications) imps.push_back(implication_to_json(imp));
  json challenges = json::array();
  json open_challenges = json::array();
  for (const auto& [id, c] : s.challenges) {
    challenges.push_back(challenge_to_json(c));
    if (c.status == Challenge::Status::Open) open_challenges.push_back(challenge_to_json(c));
  }
  json pruned = json::array();
  for (const auto& p : s.pruned)
    pruned.push_back({{"implication", implication_to_json(p.implication)},
                      {"retracted", p.retracted.name()},
                      {"seq", p.seq}});
  return {{"lastSeq", s.last_seq},
          {"propositions", std::move(props)},
          {"position",
           {{"commitments", atoms_to_json(s.position.commitments)}, {"denials", atoms_to_json(s.position.denials)}}},
          {"openTensions", std::move(open)},
          {"closedTensions", std::move(closed)},
          {"droppedTensions", s.dropped_tensions},
          {"implications", std::move(imps)},
          {"challenges", std::move(challenges)},
          {"openChallenges", std::move(open_challenges)},
          {"pruned", std::move(pruned)}};
}

json export_issues(const SessionDocument& doc) {
  const DialecticalState final_state = replay(doc.events);
  json issues = json::array();
  auto push = [&](std::string title, std::vector<std::string> labels, bool open, std::string body) {
    issues.push_back({{"number", issues.size() + 1},
                      {"title", std::move(title)},
                      {"labels", std::move(labels)},
                      {"state", open ? "open" : "closed"},
                      {"body", std::move(body)}});
  };

  for (const auto& e : doc.events) {
    std::visit(overloaded{
                   [&](const events::Commit& ev) {
                     const bool active = final_state.is_active(ev.id);
                     push("[" + ev.id.name() + "] " + ev.text, {"commitment"}, active,
                          ev.text + (active ? "" : "\n\nRetracted."));
                   },
                   [&](const events::Deny& ev) {
                     const bool active = final_state.is_active(ev.id);
                     push("[" + ev.id.name() + "] " + ev.text, {"denial"}, active,
                          ev.text + (active ? "" : "\n\nRetracted."));
                   },
                   [&](const events::AcceptTension& ev) {
                     if (!ev.resolution.added) return;
                     const NewProposition& p = *ev.resolution.added;
                     const bool active = final_state.is_active(p.id);
                     push("[" + p.id.name() + "] " + p.text, {p.side == Side::Commit ? "commitment" : "denial"}, active,
                          p.text + "\n\nIntroduced resolving " + ev.id + "." + (active ? "" : "\n\nRetracted."));
                   },
                   [&](const events::ProposeTension& ev) {
                     std::string body = ev.rationale + "\n\nSequent: " + atomic_sequent(ev.lhs, ev.rhs).text();
                     bool open = final_state.open_tensions.contains(ev.id);
                     if (auto it = final_state.closed_tensions.find(ev.id); it != final_state.closed_tensions.end()) {
                       body += std::string("\nStatus: ") + tension_status_name(it->second.status);
                       for (const auto& imp : final_state.implications)
                         if (imp.provenance == ev.id) body += "\nMaterial implication: " + imp.text();
                     } else if (final_state.dropped_tensions.contains(ev.id)) {
                       body += "\nStatus: dropped after retraction";
                     }
                     push(ev.id + ": " + atomic_sequent(ev.lhs, ev.rhs).text(), {"tension"}, open, body);
                   },
                   [&](const events::RaiseChallenge& ev) {
                     auto it = final_state.challenges.find(ev.id);
                     const bool open = it == final_state.challenges.end() || it->second.status == Challenge::Status::Open;
                     std::string body = ev.question;
                     if (!open && !it->second.note.empty()) body += "\n\nResolution: " + it->second.note;
                     push(ev.id + ": " + ev.question, {"challenge"}, open, body);
                   },
                   [](const auto&) {},
               },
               e.body);
  }
  return {{"session", doc.session}, {"issues", std::move(issues)}};
}

}  // namespace elenchus
