#pragma once

// The embedded PROV-O worked example: the base, the session that produced
// it, the scripted opponent, the chain groups, and the query battery that
// `verify-provo` runs against them.

#include <string>
#include <string_view>
#include <vector>

#include "elenchus/analysis.hpp"
#include "elenchus/json_codec.hpp"
#include "elenchus/opponent.hpp"
#include "elenchus/session_io.hpp"

namespace elenchus {

// {"groups": [{"name": "...", "atoms": ["p18", ...]}, ...]}
std::vector<AtomGroup> groups_from_json(const json& j);
std::vector<AtomGroup> load_groups(std::string_view document);
std::vector<AtomGroup> load_groups_file(const std::string& path);

namespace provo {

std::string_view base_document();
std::string_view session_document();
std::string_view oracle_script_document();
std::string_view groups_document();
std::string_view source_prose();

MaterialBase base();
SessionDocument session();
ScriptedOracle oracle();
std::vector<AtomGroup> groups();

struct Query {
  std::string group;    // "queries", "EZ3", "VI5", ...
  std::string sequent;
  bool expected;
};

// Fixed query batteries over the PROV-O base.
std::vector<Query> derivability_queries();  // atomic chain, nonmonotonicity, explicitation
std::vector<Query> rationale_queries();     // design-rationale rows EZ3 .. GE3

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<Check> run_queries(const MaterialBase& base, const std::vector<Query>& queries);
Check independence_check(const MaterialBase& base, const std::vector<AtomGroup>& groups);
Check containment_check(const MaterialBase& base);
// Replays the session and compares the canonical save of the extracted
// base with the embedded base document.
Check replay_check();

// Everything above, in that order.
std::vector<Check> verify();

}  // namespace provo
}  // namespace elenchus
