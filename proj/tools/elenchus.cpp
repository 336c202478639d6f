// elenchus: command-line entry point. Exit codes: 0 success (or `true`),
// 1 negative result (`false`, a failed check), 2 usage or runtime error.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "elenchus/analysis.hpp"
#include "elenchus/proof_export.hpp"
#include "elenchus/provo.hpp"
#include "elenchus/service.hpp"
#include "elenchus/session_io.hpp"

using namespace elenchus;

namespace {

bool g_json = false;

// In --json mode every command prints {"command", "ok", "result"} or
// {"command", "ok": false, "error": {"code", "message"}}.
void emit(const std::string& command, bool ok, const json& result, const std::string& text) {
  if (g_json)
    std::cout << json{{"command", command}, {"ok", ok}, {"result", result}}.dump(2) << "\n";
  else
    std::cout << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

std::unique_ptr<Oracle> make_oracle(const std::string& script, const std::string& endpoint, const std::string& config) {
  if (!script.empty()) return std::make_unique<ScriptedOracle>(ScriptedOracle::load_file(script));
  if (!config.empty()) return std::make_unique<HttpOracle>(oracle_config_from_json(json::parse(read_text(config))));
  if (!endpoint.empty()) {
    OracleConfig c;
    c.endpoint = endpoint;
    return std::make_unique<HttpOracle>(c);
  }
  return nullptr;
}

// --- prove ------------------------------------------------------------------

struct ProveArgs {
  std::string base;
  std::string sequent;
  bool proof = false;
  bool atomic_only = false;
  bool invertible = false;
  std::size_t budget = ProverOptions{}.node_budget;
};

int run_prove(const ProveArgs& a) {
  const MaterialBase base = load_base_file(a.base);
  ProverOptions opts;
  opts.node_budget = a.budget;
  if (a.atomic_only) opts.containment = ProverOptions::Containment::AtomicOnly;
  if (a.invertible) opts.strategy = ProverOptions::Strategy::Invertible;
  const Sequent s = parse_sequent(a.sequent);
  const QueryResult r = derivable(base, s, opts);
  std::string text = r.derivable ? "true\n" : "false\n";
  if (a.proof && r.proof) text += proof_to_text(*r.proof);
  json result = {{"sequent", s.text()}, {"derivable", r.derivable},
                 {"stats", {{"nodes", r.stats.nodes}, {"memoHits", r.stats.memo_hits}}}};
  if (a.proof) result["proof"] = r.proof ? proof_to_json(*r.proof) : json(nullptr);
  emit("prove", true, result, text);
  return r.derivable ? 0 : 1;
}

// --- analyze ----------------------------------------------------------------

int run_analyze(const std::string& base_path, const std::string& groups_path) {
  const MaterialBase base = load_base_file(base_path);
  std::ostringstream out;
  json result;

  const auto audit = containment_audit(base);
  std::size_t holds = 0;
  json audit_json = json::object();
  for (const auto& [a, ok] : audit) {
    holds += ok;
    audit_json[a.name()] = ok;
  }
  out << "containment: " << holds << "/" << audit.size() << " atoms satisfy p |- p\n";
  result["containmentAudit"] = audit_json;

  json gaps = json::array();
  out << "transitivity gaps:\n";
  for (const auto& g : transitivity_gaps(base)) {
    out << "  " << g.a.name() << " |- " << g.b.name() << ", " << g.b.name() << " |- " << g.c.name() << ", not "
        << g.a.name() << " |- " << g.c.name() << "\n";
    gaps.push_back({{"a", g.a.name()}, {"b", g.b.name()}, {"c", g.c.name()}});
  }
  result["transitivityGaps"] = gaps;

  json defeats = json::array();
  out << "monotonicity defeats:\n";
  for (const auto& d : monotonicity_defeats(base)) {
    out << "  " << d.implication.text() << " defeated by " << d.extra.name() << "\n";
    defeats.push_back({{"implication", d.implication.text()}, {"extra", d.extra.name()}});
  }
  result["monotonicityDefeats"] = defeats;

  if (!groups_path.empty()) {
    const auto report = independence_matrix(base, load_groups_file(groups_path));
    out << "independence: " << report.pair_count << " cross-group pairs, " << report.derivable_pairs << " derivable\n";
    json cells = json::array();
    for (const auto& c : report.cells) {
      if (c.derivable) out << "  " << c.from << " -> " << c.to << ": " << c.derivable << "/" << c.tested << "\n";
      cells.push_back({{"from", c.from}, {"to", c.to}, {"tested", c.tested}, {"derivable", c.derivable}});
    }
    result["independence"] = {{"pairs", report.pair_count}, {"derivablePairs", report.derivable_pairs}, {"cells", cells}};
  }
  emit("analyze", true, result, out.str());
  return 0;
}

// --- verify-provo -----------------------------------------------------------

int run_verify() {
  const auto checks = provo::verify();
  bool all = true;
  std::ostringstream out;
  json list = json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
    list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  out << (all ? "all checks passed\n" : "some checks FAILED\n");
  emit("verify-provo", all, {{"checks", list}, {"passed", all}}, out.str());
  return all ? 0 : 1;
}

// --- replay / export --------------------------------------------------------

int run_replay(const std::string& path, std::uint64_t to, const std::string& export_path) {
  SessionDocument doc = load_session_file(path);
  if (to > 0 && to < doc.events.size()) doc.events.erase(doc.events.begin() + static_cast<std::ptrdiff_t>(to), doc.events.end());
  const DialecticalState s = replay(doc.events);
  const MaterialBase base = extract_base(s);
  if (!export_path.empty()) save_base_file(base, export_path);
  std::ostringstream out;
  out << "session: " << doc.session << "\n"
      << "events: " << s.last_seq << "\n"
      << "commitments: " << s.position.commitments.size() << "\n"
      << "denials: " << s.position.denials.size() << "\n"
      << "open tensions: " << s.open_tensions.size() << "\n"
      << "implications: " << s.implications.size() << "\n";
  for (const auto& imp : s.implications) out << "  " << imp.text() << "  [" << imp.provenance << "]\n";
  if (!s.pruned.empty()) {
    out << "pruned:\n";
    for (const auto& p : s.pruned)
      out << "  " << p.implication.text() << "  (retracted " << p.retracted.name() << " at " << p.seq << ")\n";
  }
  json result = state_to_json(s);
  result["session"] = doc.session;
  emit("replay", true, result, out.str());
  return 0;
}

int run_export(const std::string& path) {
  const json issues = export_issues(load_session_file(path));
  emit("export", true, issues, issues.dump(2) + "\n");
  return 0;
}

// --- serve ------------------------------------------------------------------

Service* g_service = nullptr;

int run_serve(const std::string& addr, const std::string& data, const std::string& script, const std::string& endpoint,
              const std::string& config) {
  ServiceConfig cfg;
  cfg.data_dir = data;
  if (!script.empty() || !endpoint.empty() || !config.empty()) {
    make_oracle(script, endpoint, config);  // fail fast on a bad script or config
    cfg.oracle_factory = [=] { return make_oracle(script, endpoint, config); };
  }
  const auto [host, port] = parse_listen_address(addr);
  Service service(cfg);
  const int bound = service.bind(host, port);
  std::cerr << "elenchus: listening on " << host << ":" << bound << " (" << service.session_count()
            << " session(s) in " << data << ")\n";
  g_service = &service;
  std::signal(SIGINT, [](int) { if (g_service) g_service->stop(); });
  std::signal(SIGTERM, [](int) { if (g_service) g_service->stop(); });
  service.run();
  g_service = nullptr;
  return 0;
}

// --- session ----------------------------------------------------------------

int run_session_new(const std::string& path, const std::string& name, const std::string& source,
                    const std::string& script, const std::string& endpoint, const std::string& config) {
  SessionDocument doc{name, {}};
  save_session_file(doc, path);
  std::ostringstream out;
  json result = {{"session", name}, {"path", path}, {"candidates", json::array()}};
  out << "created " << path << "\n";
  if (!source.empty()) {
    auto oracle = make_oracle(script, endpoint, config);
    if (!oracle) throw Error("ConfigError", "--source needs an oracle (--oracle-script or --oracle-endpoint)");
    // Candidates only; nothing is committed until the respondent submits the events.
    out << "candidate commitments:\n";
    for (const auto& p : oracle->extract_commitments(read_text(source))) {
      out << "  " << p.id.name() << "  " << p.text << "\n";
      result["candidates"].push_back({{"id", p.id.name()}, {"text", p.text}});
    }
  }
  emit("session new", true, result, out.str());
  return 0;
}

// Reads respondent events (one JSON object per line) from stdin; after each,
// asks the oracle and appends whatever survives screening.
int run_session_step(const std::string& path, const std::string& script, const std::string& endpoint,
                     const std::string& config, bool interactive, std::size_t window) {
  SessionDocument doc = load_session_file(path);
  DialecticalState state = replay(doc.events);
  auto oracle = make_oracle(script, endpoint, config);
  json log = json::array();

  auto append = [&](DialecticEvent e) {
    if (e.seq == 0) e.seq = state.last_seq + 1;
    if (e.timestamp.empty()) e.timestamp = utc_timestamp();
    DialecticalState next = apply_event(state, e);
    doc.events.push_back(e);
    save_session_file(doc, path);
    state = std::move(next);
    const json j = event_to_json(e);
    log.push_back(j);
    if (!g_json) std::cout << j.dump() << "\n";
  };

  auto consult = [&] {
    if (!oracle) return;
    const std::size_t n = std::min(doc.events.size(), window);
    std::span<const DialecticEvent> transcript(doc.events.data() + doc.events.size() - n, n);
    try {
      const ScreenedProposal screened = screen_proposal(state, oracle->propose(state, transcript));
      for (const auto& d : screened.discarded) std::cerr << "discarded " << d.item << ": " << d.reason << "\n";
      const RecordedProposal recorded = record_proposal(state, screened, utc_timestamp());
      for (const auto& e : recorded.events) append(e);
      for (const auto& p : screened.accepted.new_propositions)
        std::cerr << "suggested " << p.id.name() << ": " << p.text << "\n";
    } catch (const Error& e) {
      // The protocol never waits on the oracle.
      std::cerr << "oracle: " << e.code() << ": " << e.what() << "\n";
    }
  };

  int status = 0;
  consult();
  std::string line;
  while (true) {
    if (interactive) std::cerr << "[" << state.last_seq << "] event> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      append(event_from_json(json::parse(line), false));
    } catch (const json::parse_error& e) {
      std::cerr << "FormatError: " << e.what() << "\n";
      status = 2;
      if (!interactive) break;
      continue;
    } catch (const Error& e) {
      std::cerr << e.code() << ": " << e.what() << "\n";
      status = 2;
      if (!interactive) break;
      continue;
    }
    consult();
  }
  if (g_json) emit("session step", status == 0, {{"events", log}, {"lastSeq", state.last_seq}}, "");
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonmonotonic sequent prover and dialectical knowledge-base engine"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "Machine-readable output");

  ProveArgs prove;
  auto* prove_cmd = app.add_subcommand("prove", "Decide a sequent over a material base");
  prove_cmd->add_option("--base", prove.base, "Base file")->required()->check(CLI::ExistingFile);
  prove_cmd->add_option("sequent", prove.sequent, "Sequent, e.g. \"p2 |- p18\"")->required();
  prove_cmd->add_flag("--proof", prove.proof, "Print the proof tree");
  prove_cmd->add_flag("--atomic-only", prove.atomic_only, "Restrict Containment to atomic sequents");
  prove_cmd->add_flag("--invertible", prove.invertible, "Use the invertible (single principal) strategy");
  prove_cmd->add_option("--budget", prove.budget, "Search node budget");

  std::string analyze_base, analyze_groups;
  auto* analyze_cmd = app.add_subcommand("analyze", "Structural analysis of a base");
  analyze_cmd->add_option("--base", analyze_base, "Base file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--groups", analyze_groups, "Atom groups for the independence matrix")->check(CLI::ExistingFile);

  auto* verify_cmd = app.add_subcommand("verify-provo", "Run the embedded PROV-O checks");

  std::string replay_session, replay_export;
  std::uint64_t replay_to = 0;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a session log");
  replay_cmd->add_option("--session", replay_session, "Session file")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--to", replay_to, "Stop after this sequence number");
  replay_cmd->add_option("--export-base", replay_export, "Write the extracted base here");

  std::string export_session;
  bool github_issues = false;
  auto* export_cmd = app.add_subcommand("export", "Dump a session as issue-like records");
  export_cmd->add_option("--session", export_session, "Session file")->required()->check(CLI::ExistingFile);
  export_cmd->add_flag("--github-issues", github_issues, "Issue-style export")->required();

  std::string serve_addr = env_or("ELENCHUS_ADDR", "127.0.0.1:8080");
  std::string serve_data = env_or("ELENCHUS_DATA", "elenchus-data");
  std::string oracle_script, oracle_endpoint, oracle_config;
  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--addr", serve_addr, "host:port (ELENCHUS_ADDR)");
  serve_cmd->add_option("--data", serve_data, "Session directory (ELENCHUS_DATA)");

  auto* session_cmd = app.add_subcommand("session", "Local dialectic against an oracle");
  session_cmd->require_subcommand(1);
  std::string session_path, session_name, session_source;
  bool interactive = false;
  std::size_t window = 20;
  auto* new_cmd = session_cmd->add_subcommand("new", "Create an empty session file");
  new_cmd->add_option("--session", session_path, "Session file")->required();
  new_cmd->add_option("--name", session_name, "Session name");
  new_cmd->add_option("--source", session_source, "Document to extract candidate commitments from")
      ->check(CLI::ExistingFile);
  auto* step_cmd = session_cmd->add_subcommand("step", "Append respondent events from stdin");
  step_cmd->add_option("--session", session_path, "Session file")->required()->check(CLI::ExistingFile);
  step_cmd->add_flag("--interactive", interactive, "Prompt and keep going after errors");
  step_cmd->add_option("--window", window, "Transcript events sent to the oracle");

  for (auto* cmd : {serve_cmd, new_cmd, step_cmd}) {
    auto* s = cmd->add_option("--oracle-script", oracle_script, "Scripted oracle file")->check(CLI::ExistingFile);
    auto* e = cmd->add_option("--oracle-endpoint", oracle_endpoint, "HTTP oracle URL");
    auto* c = cmd->add_option("--oracle-config", oracle_config, "HTTP oracle config file")->check(CLI::ExistingFile);
    s->excludes(e)->excludes(c);
    e->excludes(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (prove_cmd->parsed()) return run_prove(prove);
    if (analyze_cmd->parsed()) return run_analyze(analyze_base, analyze_groups);
    if (verify_cmd->parsed()) return run_verify();
    if (replay_cmd->parsed()) return run_replay(replay_session, replay_to, replay_export);
    if (export_cmd->parsed()) return run_export(export_session);
    if (serve_cmd->parsed()) return run_serve(serve_addr, serve_data, oracle_script, oracle_endpoint, oracle_config);
    if (new_cmd->parsed()) {
      command = "session new";
      return run_session_new(session_path, session_name, session_source, oracle_script, oracle_endpoint, oracle_config);
    }
    if (step_cmd->parsed()) {
      command = "session step";
      return run_session_step(session_path, oracle_script, oracle_endpoint, oracle_config, interactive, window);
    }
  } catch (const Error& e) {
    if (g_json) {
      json err = {{"code", e.code()}, {"message", e.what()}};
      if (auto* se = dynamic_cast<const SyntaxError*>(&e)) err["offset"] = se->offset();
      std::cout << json{{"command", command}, {"ok", false}, {"error", err}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
