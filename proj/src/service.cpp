#include "elenchus/service.hpp"

#include <condition_variable>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <thread>

#include <httplib.h>

#include "elenchus/analysis.hpp"
#include "elenchus/proof_export.hpp"
#include "elenchus/session_io.hpp"

namespace fs = std::filesystem;

namespace elenchus {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::pair<std::string, int> parse_listen_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) throw Error("ConfigError", "listen address must be host:port: " + addr);
  const std::string host = addr.substr(0, colon);
  const std::string port = addr.substr(colon + 1);
  try {
    std::size_t used = 0;
    const int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range("port");
    return {host, p};
  } catch (const std::exception&) {
    throw Error("ConfigError", "invalid port in listen address: " + addr);
  }
}

namespace {

int status_for(const std::string& code) {
  static const std::map<std::string, int> table = {
      {"UnknownSession", 404},   {"FormatError", 400},       {"SyntaxError", 400},
      {"EmptyInput", 400},       {"MissingTurnstile", 400},  {"InvalidAtomId", 400},
      {"UnknownAtom", 400},      {"UnsupportedMediaType", 415}, {"ResourceLimit", 422},
      {"OracleUnavailable", 503}, {"MalformedResponse", 502}, {"OracleBusy", 409},
      {"IOError", 500},
  };
  auto it = table.find(code);
  return it == table.end() ? 409 : it->second;  // everything else is a protocol violation
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  json body = {{"error", e.code()}, {"message", e.what()}};
  if (auto* se = dynamic_cast<const SyntaxError*>(&e)) body["offset"] = se->offset();
  send_json(res, status_for(e.code()), body);
}

json parse_body(const httplib::Request& req) {
  const std::string type = req.get_header_value("Content-Type");
  if (type.rfind("application/json", 0) != 0)
    throw Error("UnsupportedMediaType", "Content-Type must be application/json");
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error("FormatError", std::string("request body is not JSON: ") + e.what());
  }
}

std::string random_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  static const char* hex = "0123456789abcdef";
  std::string id(16, '0');
  std::uint64_t v = rng();
  for (auto& ch : id) {
    ch = hex[v & 0xf];
    v >>= 4;
  }
  return id;
}

struct OracleJob {
  enum class Status { None, Pending, Ready, Failed };
  Status status = Status::None;
  std::uint64_t generation = 0;
  std::shared_ptr<Oracle> oracle;
  json result;  // proposal, discarded, deferred, appliedEvents
  std::optional<Error> failure;
};

struct Session {
  std::string id;
  std::string path;
  std::mutex mu;
  SessionDocument doc;
  DialecticalState state;
  json snapshot;
  std::uint64_t snapshot_seq = ~std::uint64_t{0};
  OracleJob job;

  // Caller holds mu. Validates, persists, then commits to memory.
  DialecticEvent append(DialecticEvent e) {
    if (e.seq == 0) e.seq = state.last_seq + 1;
    if (e.timestamp.empty()) e.timestamp = utc_timestamp();
    DialecticalState next = state;
    apply_event_in_place(next, e);
    SessionDocument updated = doc;
    updated.events.push_back(e);
    save_session_file(updated, path);
    doc = std::move(updated);
    state = std::move(next);
    return e;
  }

  const json& state_view() {
    if (snapshot_seq != state.last_seq) {
      snapshot = state_to_json(state);
      snapshot["sessionId"] = id;
      snapshot["name"] = doc.session;
      snapshot_seq = state.last_seq;
    }
    return snapshot;
  }
};

const char* job_status_name(OracleJob::Status s) {
  switch (s) {
    case OracleJob::Status::None: return "none";
    case OracleJob::Status::Pending: return "pending";
    case OracleJob::Status::Ready: return "ready";
    case OracleJob::Status::Failed: return "failed";
  }
  return "none";
}

json discards_to_json(const std::vector<Discard>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back({{"item", d.item}, {"reason", d.reason}});
  return out;
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;
  mutable std::shared_mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::mutex workers_mu;
  std::condition_variable workers_done;
  std::size_t workers_running = 0;

  explicit Impl(ServiceConfig c) : config(std::move(c)) {
    if (config.data_dir.empty()) throw Error("ConfigError", "data directory is required");
    fs::create_directories(config.data_dir);
    load_existing();
    routes();
  }

  ~Impl() {
    {
      std::shared_lock lock(sessions_mu);
      for (auto& [id, s] : sessions) {
        std::lock_guard sl(s->mu);
        if (s->job.oracle) s->job.oracle->cancel();
      }
    }
    std::unique_lock lock(workers_mu);
    workers_done.wait(lock, [this] { return workers_running == 0; });
  }

  void load_existing() {
    for (const auto& entry : fs::directory_iterator(config.data_dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
      auto s = std::make_shared<Session>();
      s->id = entry.path().stem().string();
      s->path = entry.path().string();
      try {
        s->doc = load_session_file(s->path);
        s->state = replay(s->doc.events);
      } catch (const Error& e) {
        std::cerr << "elenchus: skipping " << s->path << ": " << e.what() << "\n";
        continue;
      }
      sessions.emplace(s->id, std::move(s));
    }
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(sessions_mu);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw Error("UnknownSession", "no session " + id);
    return it->second;
  }

  template <typename F>
  static httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_json(res, 500, {{"error", "InternalError"}, {"message", e.what()}});
      }
    };
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      std::shared_lock lock(sessions_mu);
      for (const auto& [id, s] : sessions) {
        std::lock_guard sl(s->mu);
        list.push_back({{"sessionId", id}, {"name", s->doc.session}, {"lastSeq", s->state.last_seq}});
      }
      send_json(res, 200, {{"sessions", list}});
    }));

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.is_object()) throw Error("FormatError", "expected a JSON object");
      auto s = std::make_shared<Session>();
      s->doc.session = body.contains("name") ? require_string(body, "name") : std::string();
      std::unique_lock lock(sessions_mu);
      do s->id = random_id();
      while (sessions.contains(s->id));
      s->path = (fs::path(config.data_dir) / (s->id + ".json")).string();
      save_session_file(s->doc, s->path);
      sessions.emplace(s->id, s);
      send_json(res, 201, {{"sessionId", s->id}, {"name", s->doc.session}});
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      std::lock_guard lock(s->mu);
      send_json(res, 200, s->state_view());
    }));

    server.Get(R"(/sessions/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      std::lock_guard lock(s->mu);
      send_json(res, 200, session_to_json(s->doc));
    }));

    server.Post(R"(/sessions/([^/]+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      const DialecticEvent e = event_from_json(parse_body(req), false);
      std::lock_guard lock(s->mu);
      send_json(res, 201, event_to_json(s->append(e)));
    }));

    server.Get(R"(/sessions/([^/]+)/base)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      std::lock_guard lock(s->mu);
      send_json(res, 200, to_json(extract_base(s->state)));
    }));

    server.Get(R"(/sessions/([^/]+)/issues)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      std::lock_guard lock(s->mu);
      send_json(res, 200, export_issues(s->doc));
    }));

    server.Get(R"(/sessions/([^/]+)/analysis)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      MaterialBase base = [&] {
        std::lock_guard lock(s->mu);
        return extract_base(s->state);
      }();
      send_json(res, 200, analysis_json(base));
    }));

    server.Post(R"(/sessions/([^/]+)/oracle)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      start_oracle(find(req.matches[1]));
      send_json(res, 202, {{"status", "pending"}});
    }));

    server.Get(R"(/sessions/([^/]+)/proposals)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      std::lock_guard lock(s->mu);
      const OracleJob& job = s->job;
      if (job.status == OracleJob::Status::Failed && job.failure) {
        json body = {{"status", "failed"}, {"error", job.failure->code()}, {"message", job.failure->what()}};
        send_json(res, status_for(job.failure->code()), body);
        return;
      }
      json body = job.status == OracleJob::Status::Ready ? job.result : json::object();
      body["status"] = job_status_name(job.status);
      send_json(res, 200, body);
    }));

    server.Delete(R"(/sessions/([^/]+)/proposals)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      std::lock_guard lock(s->mu);
      const bool pending = s->job.status == OracleJob::Status::Pending;
      if (pending) {
        if (s->job.oracle) s->job.oracle->cancel();
        ++s->job.generation;
        s->job.status = OracleJob::Status::None;
        s->job.oracle.reset();
      }
      send_json(res, 200, {{"cancelled", pending}});
    }));

    server.Post("/prove", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, prove(parse_body(req)));
    }));
  }

  static json analysis_json(const MaterialBase& base) {
    json audit = json::object();
    for (const auto& [atom, ok] : containment_audit(base)) audit[atom.name()] = ok;
    json gaps = json::array();
    for (const auto& g : transitivity_gaps(base))
      gaps.push_back({{"a", g.a.name()}, {"b", g.b.name()}, {"c", g.c.name()}});
    json defeats = json::array();
    for (const auto& d : monotonicity_defeats(base))
      defeats.push_back({{"implication", d.implication.text()}, {"extra", d.extra.name()}});
    return {{"containmentAudit", audit}, {"transitivityGaps", gaps}, {"monotonicityDefeats", defeats}};
  }

  json prove(const json& body) {
    if (!body.is_object()) throw Error("FormatError", "expected a JSON object");
    MaterialBase base;
    if (auto it = body.find("base"); it != body.end()) {
      base = base_from_json(*it);
    } else if (body.contains("sessionId")) {
      auto s = find(require_string(body, "sessionId"));
      std::lock_guard lock(s->mu);
      base = extract_base(s->state);
    } else {
      throw Error("FormatError", "request needs 'base' or 'sessionId'");
    }
    const Sequent sequent = parse_sequent(require_string(body, "sequent"));
    const bool want_proof = body.value("proof", false);
    ProverOptions options;
    options.node_budget = body.value("budget", options.node_budget);
    const QueryResult r = derivable(base, sequent, options);
    json out = {{"derivable", r.derivable},
                {"sequent", sequent.text()},
                {"stats", {{"nodes", r.stats.nodes}, {"memoHits", r.stats.memo_hits}}}};
    out["proof"] = want_proof && r.proof ? proof_to_json(*r.proof) : json(nullptr);
    return out;
  }

  void start_oracle(const std::shared_ptr<Session>& s) {
    if (!config.oracle_factory) throw Error("OracleUnavailable", "no oracle configured");
    std::lock_guard lock(s->mu);
    if (s->job.status == OracleJob::Status::Pending) throw Error("OracleBusy", "an oracle call is already in flight");
    std::shared_ptr<Oracle> oracle = config.oracle_factory();
    if (!oracle) throw Error("OracleUnavailable", "no oracle configured");
    const std::uint64_t generation = ++s->job.generation;
    s->job = OracleJob{OracleJob::Status::Pending, generation, oracle, json(), std::nullopt};

    const std::size_t n = std::min(s->doc.events.size(), config.transcript_window);
    std::vector<DialecticEvent> transcript(s->doc.events.end() - static_cast<std::ptrdiff_t>(n), s->doc.events.end());
    DialecticalState snapshot = s->state;

    {
      std::lock_guard wl(workers_mu);
      ++workers_running;
    }
    std::thread([this, s, oracle, generation, snapshot = std::move(snapshot), transcript = std::move(transcript)] {
      run_oracle(s, oracle, generation, snapshot, transcript);
      std::lock_guard wl(workers_mu);
      if (--workers_running == 0) workers_done.notify_all();
    }).detach();
  }

  static void run_oracle(const std::shared_ptr<Session>& s, const std::shared_ptr<Oracle>& oracle,
                         std::uint64_t generation, const DialecticalState& snapshot,
                         const std::vector<DialecticEvent>& transcript) {
    std::optional<OpponentProposal> proposal;
    std::optional<Error> failure;
    try {
      proposal = oracle->propose(snapshot, transcript);
    } catch (const Error& e) {
      failure = e;
    } catch (const std::exception& e) {
      failure = Error("OracleUnavailable", e.what());
    }
    std::lock_guard lock(s->mu);
    if (s->job.generation != generation) return;  // cancelled meanwhile
    s->job.oracle.reset();
    if (failure) {
      s->job.status = OracleJob::Status::Failed;
      s->job.failure = failure;
      return;
    }
    // Screen against the state as it is now; the respondent may have moved on.
    const ScreenedProposal screened = screen_proposal(s->state, *proposal);
    const RecordedProposal recorded = record_proposal(s->state, screened, utc_timestamp());
    json applied = json::array();
    json discarded = discards_to_json(screened.discarded);
    for (DialecticEvent e : recorded.events) {
      e.seq = 0;  // renumbered in case an earlier event was rejected
      try {
        applied.push_back(event_to_json(s->append(e)));
      } catch (const Error& err) {
        discarded.push_back({{"item", event_kind_name(e.body)}, {"reason", err.code() + ": " + err.what()}});
      }
    }
    OpponentProposal deferred;
    deferred.tensions = recorded.deferred;
    s->job.status = OracleJob::Status::Ready;
    s->job.result = {{"proposal", proposal_to_json(screened.accepted)},
                     {"discarded", discarded},
                     {"deferred", proposal_to_json(deferred)["tensions"]},
                     {"appliedEvents", applied}};
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error("BindError", "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void Service::run() { impl_->server.listen_after_bind(); }
void Service::stop() { impl_->server.stop(); }

std::size_t Service::session_count() const {
  std::shared_lock lock(impl_->sessions_mu);
  return impl_->sessions.size();
}

}  // namespace elenchus
