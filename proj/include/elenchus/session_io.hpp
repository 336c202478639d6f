#pragma once

// Session file format and JSON views of dialectical state.
//
//   {"session": "name",
//    "events": [{"seq": 1, "timestamp": "...", "actor": "respondent",
//                "kind": "commit", "id": "p1", "text": "..."}, ...]}
//
// Per kind, beyond seq/timestamp/actor/kind:
//   commit, deny        id, text
//   retract             id
//   propose_tension     id, lhs, rhs, rationale
//   accept_tension      id, resolution {kind: retract|refine, retracted,
//                       added? {id, text, side: commit|deny}, endorsed? {lhs, rhs}}
//   contest_tension     id
//   raise_challenge     id, question, targets
//   resolve_challenge   id, note

#include <string>
#include <string_view>
#include <vector>

#include "elenchus/dialectic.hpp"
#include "elenchus/json_codec.hpp"

namespace elenchus {

struct SessionDocument {
  std::string session;
  std::vector<DialecticEvent> events;
};

std::string actor_name(Actor a);
Actor actor_from_name(const std::string& name);  // throws FormatError

json event_to_json(const DialecticEvent& e);
// With require_seq=false the "seq" field may be absent (HTTP submissions);
// it then decodes as 0. Throws FormatError / InvalidAtomId.
DialecticEvent event_from_json(const json& j, bool require_seq = true);

json session_to_json(const SessionDocument& doc);
SessionDocument session_from_json(const json& j);
SessionDocument load_session(std::string_view document);
std::string save_session(const SessionDocument& doc);
SessionDocument load_session_file(const std::string& path);
// Writes atomically (temp file, fsync, rename).
void save_session_file(const SessionDocument& doc, const std::string& path);

json tension_to_json(const Tension& t);
json challenge_to_json(const Challenge& c);

// Snapshot: propositions, position, open tensions, implications, challenges.
json state_to_json(const DialecticalState& state);

// One-way dump as issue-like records: {title, labels, state, body}; one per
// proposition, tension and challenge, in the order they first appeared.
json export_issues(const SessionDocument& doc);

}  // namespace elenchus
