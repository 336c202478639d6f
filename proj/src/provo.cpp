#include "elenchus/provo.hpp"

#include <fstream>
#include <sstream>

namespace elenchus::provo::embedded {
extern const std::string_view base;
extern const std::string_view session;
extern const std::string_view oracle_script;
extern const std::string_view groups;
extern const std::string_view section_3_1;
}  // namespace elenchus::provo::embedded

namespace elenchus {

std::vector<AtomGroup> groups_from_json(const json& j) {
  const json& list = require_field(j, "groups");
  if (!list.is_array()) throw Error("FormatError", "'groups' must be an array");
  std::vector<AtomGroup> out;
  for (const auto& g : list) out.push_back({require_string(g, "name"), atoms_from_json(require_field(g, "atoms"), "atoms")});
  return out;
}

std::vector<AtomGroup> load_groups(std::string_view document) {
  try {
    return groups_from_json(json::parse(document));
  } catch (const json::parse_error& e) {
    throw Error("FormatError", std::string("malformed groups document: ") + e.what());
  }
}

std::vector<AtomGroup> load_groups_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_groups(ss.str());
}

namespace provo {

std::string_view base_document() { return embedded::base; }
std::string_view session_document() { return embedded::session; }
std::string_view oracle_script_document() { return embedded::oracle_script; }
std::string_view groups_document() { return embedded::groups; }
std::string_view source_prose() { return embedded::section_3_1; }

MaterialBase base() { return load_base(embedded::base); }
SessionDocument session() { return load_session(embedded::session); }
ScriptedOracle oracle() { return ScriptedOracle::load(embedded::oracle_script); }
std::vector<AtomGroup> groups() { return load_groups(embedded::groups); }

std::vector<Query> derivability_queries() {
  std::vector<Query> q;
  const MaterialBase b = base();
  for (const auto& imp : b.implications()) q.push_back({"atomic chain", imp.text(), true});
  q.push_back({"nontransitivity", "p2 |- p23", false});
  q.push_back({"nonmonotonicity", "p2, p23 |- p18", false});
  q.push_back({"multi-successor", "p9 |- p25", true});
  q.push_back({"nonmonotonicity", "p9, p26 |- p25", false});
  for (const auto& imp : b.implications()) {
    q.push_back({"explicitation", "|- " + imp.lhs.begin()->name() + " -> " + imp.rhs.begin()->name(), true});
  }
  q.push_back({"explicitation", "|- p2 -> p23", false});
  q.push_back({"supraclassicality", "|- p2 | ~p2", true});
  q.push_back({"supraclassicality", "p2 & ~p2 |-", true});
  return q;
}

std::vector<Query> rationale_queries() {
  return {
      {"EZ3", "p2 |- p23", false},
      {"EZ3", "|- (p2 -> p18) & (p18 -> p23) -> p2 -> p23", true},
      {"EZ3", "|- p2 -> p23", false},
      {"VI5", "p7 |- p28", true},
      {"VI5", "p28 |- p7", false},
      {"VI1", "p2 |- p27", false},
      {"VI1", "p2 |- p29", false},
      {"VI1", "p3 |- p18", false},
      {"VI1", "p3 |- p29", false},
      {"VI1", "p4 |- p18", false},
      {"VI1", "p4 |- p27", false},
      {"VI1", "p7 |- p30", false},
      {"VI1", "p6 |- p28", false},
      {"EZ1", "p7 |- p28", true},
      {"EZ1", "p7, p24 |- p28", false},
      {"XG11", "p9 |- p25", true},
      {"XG11", "p9 |- p26", true},
      {"XG11", "p9, p25 |- p26", false},
      {"EV1", "p3 |- p27", true},
      {"EV1", "p3 |- p18", false},
      {"EV1", "p3 |- p25", false},
      {"GE3", "p7 |- p18", false},
      {"GE3", "p7 |- p23", false},
      {"GE3", "p18 |- p23", true},
  };
}

std::vector<Check> run_queries(const MaterialBase& b, const std::vector<Query>& queries) {
  std::vector<Check> out;
  Prover prover(b);
  for (const auto& q : queries) {
    Check c{q.group + ": " + q.sequent + " is " + (q.expected ? "true" : "false"), false, {}};
    try {
      const bool got = prover.derivable(parse_sequent(q.sequent)).derivable;
      c.passed = got == q.expected;
      if (!c.passed) c.detail = std::string("got ") + (got ? "true" : "false");
    } catch (const Error& e) {
      c.detail = e.code() + ": " + e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

Check independence_check(const MaterialBase& b, const std::vector<AtomGroup>& groups) {
  Check c{"independence: 34 cross-group pairs, none derivable", false, {}};
  try {
    const auto report = independence_matrix(b, groups);
    c.passed = report.pair_count == 34 && report.derivable_pairs == 0 && report.total_derivable() == 0;
    c.detail = std::to_string(report.pair_count) + " pairs, " + std::to_string(report.derivable_pairs) + " derivable";
  } catch (const Error& e) {
    c.detail = e.code() + ": " + e.what();
  }
  return c;
}

Check containment_check(const MaterialBase& b) {
  Check c{"containment: p |- p for all 19 atoms", false, {}};
  const auto audit = containment_audit(b);
  std::size_t ok = 0;
  for (const auto& [atom, holds] : audit) ok += holds ? 1 : 0;
  c.passed = audit.size() == 19 && ok == 19;
  c.detail = std::to_string(ok) + "/" + std::to_string(audit.size()) + " atoms";
  return c;
}

Check replay_check() {
  Check c{"replay: 19 commitments, 0 denials, 0 open tensions, 9 implications, base identical", false, {}};
  try {
    const DialecticalState s = replay(session().events);
    const std::string saved = save_base(extract_base(s));
    const bool counts = s.position.commitments.size() == 19 && s.position.denials.empty() &&
                        s.open_tensions.empty() && s.implications.size() == 9;
    c.passed = counts && saved == base_document();
    std::ostringstream d;
    d << s.position.commitments.size() << " commitments, " << s.position.denials.size() << " denials, "
      << s.open_tensions.size() << " open tensions, " << s.implications.size() << " implications, base "
      << (saved == base_document() ? "identical" : "differs");
    c.detail = d.str();
  } catch (const Error& e) {
    c.detail = e.code() + ": " + e.what();
  }
  return c;
}

std::vector<Check> verify() {
  const MaterialBase b = base();
  std::vector<Check> out = run_queries(b, derivability_queries());
  for (auto& c : run_queries(b, rationale_queries())) out.push_back(std::move(c));
  out.push_back(independence_check(b, groups()));
  out.push_back(containment_check(b));
  out.push_back(replay_check());
  return out;
}

}  // namespace provo
}  // namespace elenchus
