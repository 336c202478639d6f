#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <thread>

#include "elenchus/provo.hpp"
#include "elenchus/service.hpp"
#include "elenchus/session_io.hpp"

using namespace elenchus;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

// Blocks in propose() until released or cancelled.
class GateOracle : public Oracle {
 public:
  struct Gate {
    std::mutex mu;
    std::condition_variable cv;
    bool open = false;
    int entered = 0;
  };

  explicit GateOracle(std::shared_ptr<Gate> g) : gate_(std::move(g)) {}

  OpponentProposal propose(const DialecticalState&, std::span<const DialecticEvent>) override {
    std::unique_lock lock(gate_->mu);
    ++gate_->entered;
    gate_->cv.notify_all();
    gate_->cv.wait(lock, [&] { return gate_->open || cancelled_; });
    if (cancelled_) throw Error("OracleUnavailable", "cancelled");
    return {};
  }
  std::vector<PropositionRecord> extract_commitments(std::string_view) override { return {}; }
  void cancel() override {
    std::lock_guard lock(gate_->mu);
    cancelled_ = true;
    gate_->cv.notify_all();
  }

 private:
  std::shared_ptr<Gate> gate_;
  bool cancelled_ = false;
};

class FailingOracle : public Oracle {
 public:
  explicit FailingOracle(std::string code) : code_(std::move(code)) {}
  OpponentProposal propose(const DialecticalState&, std::span<const DialecticEvent>) override {
    throw Error(code_, "test failure");
  }
  std::vector<PropositionRecord> extract_commitments(std::string_view) override { return {}; }

 private:
  std::string code_;
};

class Running {
 public:
  explicit Running(ServiceConfig c) : service_(std::move(c)) {
    port_ = service_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_.run(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
    for (int i = 0; i < 200 && !client_->Get("/sessions"); ++i) std::this_thread::sleep_for(5ms);
  }
  ~Running() {
    service_.stop();
    thread_.join();
  }

  httplib::Client& http() { return *client_; }
  Service& service() { return service_; }

 private:
  Service service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

struct Reply {
  int status = 0;
  json body;
};

Reply unpack(const httplib::Result& r) {
  if (!r) return {0, nullptr};
  return {r->status, r->body.empty() ? json(nullptr) : json::parse(r->body)};
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("elenchus_service_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
  }
  void TearDown() override {
    server.reset();
    fs::remove_all(dir);
  }

  void start(std::function<std::unique_ptr<Oracle>()> factory = {}) {
    server = std::make_unique<Running>(ServiceConfig{dir.string(), std::move(factory), 20});
  }

  Reply get(const std::string& path) { return unpack(server->http().Get(path)); }
  Reply post(const std::string& path, const json& body) {
    return unpack(server->http().Post(path, body.dump(), "application/json"));
  }
  Reply del(const std::string& path) { return unpack(server->http().Delete(path)); }

  std::string new_session(const std::string& name = "test") {
    const Reply r = post("/sessions", {{"name", name}});
    EXPECT_EQ(r.status, 201);
    return r.body["sessionId"];
  }

  Reply append(const std::string& id, json event) {
    event.erase("seq");
    return post("/sessions/" + id + "/events", event);
  }

  Reply await_proposal(const std::string& id) {
    for (int i = 0; i < 1000; ++i) {
      Reply r = get("/sessions/" + id + "/proposals");
      if (r.body.is_object() && r.body.value("status", "") != "pending") return r;
      std::this_thread::sleep_for(5ms);
    }
    return {0, nullptr};
  }

  fs::path dir;
  std::unique_ptr<Running> server;
};

std::unique_ptr<Oracle> provo_oracle() { return std::make_unique<ScriptedOracle>(provo::oracle()); }

}  // namespace

TEST_F(ServiceTest, ProveAgainstAnInlineBase) {
  start();
  const json base = json::parse(provo::base_document());
  Reply r = post("/prove", {{"base", base}, {"sequent", "p2 |- p18"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["derivable"], true);
  EXPECT_EQ(r.body["sequent"], "p2 |- p18");
  EXPECT_TRUE(r.body["proof"].is_null());
  EXPECT_GE(r.body["stats"]["nodes"].get<int>(), 1);

  r = post("/prove", {{"base", base}, {"sequent", "p2, p23 |- p18"}, {"proof", true}});
  EXPECT_EQ(r.body["derivable"], false);

  r = post("/prove", {{"base", base}, {"sequent", "|- p2 -> p18"}, {"proof", true}});
  EXPECT_EQ(r.body["proof"]["rule"], "R->");
  EXPECT_EQ(r.body["proof"]["premises"][0]["rule"], "AxiomBase");
}

TEST_F(ServiceTest, ProveErrors) {
  start();
  const json base = json::parse(provo::base_document());
  Reply r = post("/prove", {{"base", base}, {"sequent", "p2 & |- p3"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"], "SyntaxError");
  EXPECT_EQ(r.body["offset"], 5);
  r = post("/prove", {{"base", base}, {"sequent", "p2 |- p99"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"], "UnknownAtom");
  r = post("/prove", {{"base", base}, {"sequent", "p2 & p3 & p4 |- p5 | p6 | p7"}, {"budget", 2}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "ResourceLimit");
  r = post("/prove", {{"sequent", "p2 |- p3"}});
  EXPECT_EQ(r.status, 400);
  r = post("/prove", {{"sessionId", "0000"}, {"sequent", "p2 |- p3"}});
  EXPECT_EQ(r.status, 404);
  r = unpack(server->http().Post("/prove", "{}", "text/plain"));
  EXPECT_EQ(r.status, 415);
  EXPECT_EQ(r.body["error"], "UnsupportedMediaType");
  r = unpack(server->http().Post("/prove", "{not json", "application/json"));
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"], "FormatError");
}

TEST_F(ServiceTest, SessionLifecycle) {
  start();
  const std::string id = new_session("demo");
  EXPECT_EQ(id.size(), 16u);
  EXPECT_EQ(get("/sessions/" + id + "/base").body.dump(), R"({"atoms":[],"implications":[]})");
  EXPECT_EQ(get("/sessions/" + id).body["name"], "demo");
  EXPECT_EQ(get("/sessions").body["sessions"].size(), 1u);

  Reply r = append(id, {{"actor", "respondent"}, {"kind", "commit"}, {"id", "p1"}, {"text", "one"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["seq"], 1);
  EXPECT_FALSE(r.body["timestamp"].get<std::string>().empty());

  r = append(id, {{"actor", "respondent"}, {"kind", "deny"}, {"id", "p1"}, {"text", "one"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["error"], "BilateralViolation");
  r = append(id, {{"actor", "opponent"}, {"kind", "commit"}, {"id", "p2"}, {"text", "x"}});
  EXPECT_EQ(r.status, 409);
  r = append(id, {{"actor", "respondent"}, {"kind", "weaken"}});
  EXPECT_EQ(r.status, 400);
  r = post("/sessions/" + id + "/events",
           {{"seq", 7}, {"actor", "respondent"}, {"kind", "commit"}, {"id", "p2"}, {"text", "x"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["error"], "SequenceGap");

  const json state = get("/sessions/" + id).body;
  EXPECT_EQ(state["lastSeq"], 1);
  EXPECT_EQ(state["position"]["commitments"], json::array({"p1"}));
  EXPECT_EQ(get("/sessions/" + id + "/events").body["events"].size(), 1u);
  EXPECT_EQ(get("/sessions/nope").status, 404);
  EXPECT_EQ(get("/sessions/nope/base").body["error"], "UnknownSession");
}

TEST_F(ServiceTest, CorsPreflight) {
  start();
  auto r = server->http().Options("/sessions");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
}

// The same session through the API and through the engine.
TEST_F(ServiceTest, ApiMatchesEngine) {
  start();
  const std::string id = new_session("prov-o");
  for (const auto& e : provo::session().events) {
    const Reply r = append(id, event_to_json(e));
    ASSERT_EQ(r.status, 201) << r.body.dump();
    EXPECT_EQ(r.body["seq"], e.seq);
  }
  json via_api = get("/sessions/" + id).body;
  via_api.erase("sessionId");
  via_api.erase("name");
  EXPECT_EQ(via_api, state_to_json(replay(provo::session().events)));
  EXPECT_EQ(get("/sessions/" + id + "/base").body, json::parse(provo::base_document()));
  EXPECT_EQ(get("/sessions/" + id + "/issues").body["issues"].size(), 38u);

  const json analysis = get("/sessions/" + id + "/analysis").body;
  EXPECT_EQ(analysis["containmentAudit"].size(), 19u);
  EXPECT_EQ(analysis["monotonicityDefeats"].size(), 153u);

  const Reply r = post("/prove", {{"sessionId", id}, {"sequent", "p9 |- p25"}});
  EXPECT_EQ(r.body["derivable"], true);
}

TEST_F(ServiceTest, PersistsAcrossRestart) {
  start();
  const std::string id = new_session("durable");
  for (std::size_t i = 0; i < 20; ++i) ASSERT_EQ(append(id, event_to_json(provo::session().events[i])).status, 201);
  const json before = get("/sessions/" + id).body;
  server.reset();
  EXPECT_TRUE(fs::exists(dir / (id + ".json")));
  fs::path stray = dir / "corrupt.json";
  { std::ofstream(stray) << "{"; }
  start();
  EXPECT_EQ(server->service().session_count(), 1u);
  EXPECT_EQ(get("/sessions/" + id).body, before);
  EXPECT_EQ(append(id, event_to_json(provo::session().events[20])).body["seq"], 21);
}

TEST_F(ServiceTest, ScriptedOracleRound) {
  start(provo_oracle);
  const std::string id = new_session();
  EXPECT_EQ(get("/sessions/" + id + "/proposals").body["status"], "none");
  for (std::size_t i = 0; i < 10; ++i) append(id, event_to_json(provo::session().events[i]));
  Reply r = post("/sessions/" + id + "/oracle", json::object());
  EXPECT_EQ(r.status, 202);
  r = await_proposal(id);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["status"], "ready");
  ASSERT_EQ(r.body["appliedEvents"].size(), 2u);
  EXPECT_EQ(r.body["appliedEvents"][0]["id"], "challenge-11");
  EXPECT_EQ(r.body["appliedEvents"][1]["id"], "tension-11");
  EXPECT_EQ(r.body["appliedEvents"][1]["seq"], 12);
  EXPECT_TRUE(r.body["discarded"].empty());
  EXPECT_EQ(r.body["proposal"]["newPropositions"][0]["id"], "p18");

  const json state = get("/sessions/" + id).body;
  EXPECT_EQ(state["lastSeq"], 12);
  EXPECT_TRUE(state["implications"].empty());
  EXPECT_EQ(get("/sessions/" + id + "/base").body["implications"].size(), 0u);
}

TEST_F(ServiceTest, OneCallInFlight) {
  auto gate = std::make_shared<GateOracle::Gate>();
  start([gate] { return std::make_unique<GateOracle>(gate); });
  const std::string id = new_session();
  EXPECT_EQ(post("/sessions/" + id + "/oracle", json::object()).status, 202);
  {
    std::unique_lock lock(gate->mu);
    gate->cv.wait_for(lock, 5s, [&] { return gate->entered == 1; });
  }
  Reply r = post("/sessions/" + id + "/oracle", json::object());
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["error"], "OracleBusy");
  EXPECT_EQ(get("/sessions/" + id + "/proposals").body["status"], "pending");
  // Events still go through while the oracle thinks.
  EXPECT_EQ(append(id, {{"actor", "respondent"}, {"kind", "commit"}, {"id", "p1"}, {"text", "x"}}).status, 201);

  EXPECT_EQ(del("/sessions/" + id + "/proposals").body["cancelled"], true);
  EXPECT_EQ(get("/sessions/" + id + "/proposals").body["status"], "none");
  EXPECT_EQ(del("/sessions/" + id + "/proposals").body["cancelled"], false);

  EXPECT_EQ(post("/sessions/" + id + "/oracle", json::object()).status, 202);
  {
    std::lock_guard lock(gate->mu);
    gate->open = true;
    gate->cv.notify_all();
  }
  r = await_proposal(id);
  EXPECT_EQ(r.body["status"], "ready");
  EXPECT_TRUE(r.body["appliedEvents"].empty());
}

TEST_F(ServiceTest, ShutdownCancelsPendingCalls) {
  auto gate = std::make_shared<GateOracle::Gate>();
  start([gate] { return std::make_unique<GateOracle>(gate); });
  const std::string id = new_session();
  EXPECT_EQ(post("/sessions/" + id + "/oracle", json::object()).status, 202);
  server.reset();  // must not hang
  SUCCEED();
}

TEST_F(ServiceTest, OracleFailures) {
  start();
  const std::string id = new_session();
  Reply r = post("/sessions/" + id + "/oracle", json::object());
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(r.body["error"], "OracleUnavailable");
  server.reset();

  for (const auto& [code, status] : std::vector<std::pair<std::string, int>>{{"OracleUnavailable", 503},
                                                                             {"MalformedResponse", 502}}) {
    start([code = code] { return std::make_unique<FailingOracle>(code); });
    EXPECT_EQ(post("/sessions/" + id + "/oracle", json::object()).status, 202);
    r = await_proposal(id);
    EXPECT_EQ(r.status, status);
    EXPECT_EQ(r.body["status"], "failed");
    EXPECT_EQ(r.body["error"], code);
    // The protocol is not blocked.
    EXPECT_EQ(append(id, {{"actor", "respondent"}, {"kind", "commit"}, {"id", "q" + code}, {"text", "x"}}).status, 201);
    server.reset();
  }
}

TEST(ListenAddress, Parsing) {
  EXPECT_EQ(parse_listen_address("127.0.0.1:8080"), std::make_pair(std::string("127.0.0.1"), 8080));
  EXPECT_EQ(parse_listen_address("[::1]:0").second, 0);
  for (const char* bad : {"8080", ":80", "host:", "host:http", "host:70000"})
    EXPECT_THROW(parse_listen_address(bad), Error) << bad;
}
