#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "elenchus/provo.hpp"
#include "elenchus/session_io.hpp"

using namespace elenchus;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status = -1;
  std::string out;
};

Invocation run(const std::string& args, const std::string& stdin_path = "/dev/null") {
  const std::string cmd = std::string(ELENCHUS_CLI) + " " + args + " < " + stdin_path + " 2>/dev/null";
  Invocation r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fixture(const char* name) { return std::string(ELENCHUS_FIXTURES) + "/" + name; }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("elenchus_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string path(const char* name) const { return (dir / name).string(); }

  fs::path dir;
};

const std::string kBase = "--base " + fixture("base.json");

}  // namespace

TEST(Cli, ProveExitCodes) {
  Invocation r = run("prove " + kBase + " 'p2, p23 |- p18'");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out, "false\n");
  r = run("prove " + kBase + " 'p2 |- p2'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "true\n");
  r = run("prove " + kBase + " 'p2 |- p18'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(run("prove " + kBase + " 'p2 & |- p3'").status, 2);
  EXPECT_EQ(run("prove " + kBase + " 'p2 |- p99'").status, 2);
  EXPECT_EQ(run("prove --base /nonexistent.json 'p2 |- p2'").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST(Cli, ProveWithProof) {
  const Invocation r = run("prove " + kBase + " --proof '|- p2 -> p18'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "true\n|- p2 -> p18  [R-> p2 -> p18]\n  p2 |- p18  [AxiomBase]\n");
  EXPECT_EQ(run("prove " + kBase + " --atomic-only --invertible '|- p2 -> p18'").status, 0);
  EXPECT_EQ(run("prove " + kBase + " --budget 2 'p2 & p3 & p4 |- p5 | p6 | p7'").status, 2);
}

TEST(Cli, JsonEnvelope) {
  Invocation r = run("--json prove " + kBase + " 'p9 |- p25'");
  EXPECT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["command"], "prove");
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(j["result"]["derivable"], true);
  EXPECT_EQ(j["result"]["sequent"], "p9 |- p25");
  EXPECT_TRUE(j["result"]["stats"].contains("nodes"));

  r = run("--json prove " + kBase + " '(p2 |- p3'");
  EXPECT_EQ(r.status, 2);
  j = json::parse(r.out);
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["error"]["code"], "SyntaxError");
  EXPECT_EQ(j["error"]["offset"], 4);
}

TEST(Cli, Analyze) {
  const Invocation r = run("--json analyze " + kBase + " --groups " + fixture("groups.json"));
  EXPECT_EQ(r.status, 0);
  const json j = json::parse(r.out)["result"];
  EXPECT_EQ(j["containmentAudit"].size(), 19u);
  EXPECT_EQ(j["monotonicityDefeats"].size(), 153u);
  EXPECT_EQ(j["independence"]["pairs"], 34);
  EXPECT_EQ(j["independence"]["derivablePairs"], 0);
  const Invocation text = run("analyze " + kBase);
  EXPECT_NE(text.out.find("containment: 19/19 atoms satisfy p |- p"), std::string::npos);
}

TEST(Cli, VerifyProvo) {
  const Invocation r = run("verify-provo");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST_F(CliTest, ReplayExportsTheBase) {
  const Invocation r = run("replay --session " + fixture("session.json") + " --export-base " + path("base.json"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(read(path("base.json")), provo::base_document());

  const Invocation partial = run("--json replay --session " + fixture("session.json") + " --to 13");
  EXPECT_EQ(partial.status, 0);
  EXPECT_EQ(json::parse(partial.out)["result"]["lastSeq"], 13);
  EXPECT_EQ(json::parse(partial.out)["result"]["implications"].size(), 1u);
}

TEST_F(CliTest, ReplayReportsTheBadEvent) {
  std::ofstream(path("bad.json")) << R"({"session":"x","events":[
    {"seq":1,"actor":"respondent","kind":"commit","id":"a","text":"t","timestamp":""},
    {"seq":2,"actor":"respondent","kind":"deny","id":"a","text":"t","timestamp":""}]})";
  const Invocation r = run("--json replay --session " + path("bad.json"));
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(json::parse(r.out)["error"]["code"], "BilateralViolation");
}

TEST(Cli, ExportIssues) {
  const Invocation r = run("export --session " + fixture("session.json") + " --github-issues");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["issues"].size(), 38u);
}

// Feeding the respondent's events through `session step` against the scripted
// oracle regenerates the recorded session, timestamps aside.
TEST_F(CliTest, SessionStepReproducesProvo) {
  const std::string session = path("s.json");
  Invocation r = run("session new --session " + session + " --name prov-o-section-3.1 --source " +
              fixture("section_3_1.txt") + " --oracle-script " + fixture("oracle_script.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("p2  Entity is a thing with fixed aspects"), std::string::npos);
  EXPECT_EQ(load_session_file(session).events.size(), 0u);  // candidates only

  {
    std::ofstream in(path("respondent.jsonl"));
    for (const auto& e : provo::session().events) {
      if (e.actor != Actor::Respondent) continue;
      json j = event_to_json(e);
      j.erase("seq");
      j.erase("timestamp");
      in << j.dump() << "\n";
    }
  }
  r = run("session step --session " + session + " --oracle-script " + fixture("oracle_script.json"),
          path("respondent.jsonl"));
  ASSERT_EQ(r.status, 0);

  const SessionDocument got = load_session_file(session);
  const SessionDocument want = provo::session();
  EXPECT_EQ(got.session, want.session);
  ASSERT_EQ(got.events.size(), want.events.size());
  for (std::size_t i = 0; i < got.events.size(); ++i) {
    json a = event_to_json(got.events[i]);
    json b = event_to_json(want.events[i]);
    a.erase("timestamp");
    b.erase("timestamp");
    EXPECT_EQ(a, b) << i;
  }
  EXPECT_EQ(save_base(extract_base(replay(got.events))), provo::base_document());
}

TEST_F(CliTest, SessionStepStopsOnARejectedEvent) {
  const std::string session = path("s.json");
  ASSERT_EQ(run("session new --session " + session).status, 0);
  std::ofstream(path("in.jsonl")) << R"({"actor":"respondent","kind":"commit","id":"a","text":"t"})" "\n"
                                  << R"({"actor":"respondent","kind":"deny","id":"a","text":"t"})" "\n"
                                  << R"({"actor":"respondent","kind":"commit","id":"b","text":"t"})" "\n";
  EXPECT_EQ(run("session step --session " + session, path("in.jsonl")).status, 2);
  EXPECT_EQ(load_session_file(session).events.size(), 1u);
  EXPECT_EQ(run("session step --interactive --session " + session, path("in.jsonl")).status, 2);
  EXPECT_EQ(load_session_file(session).events.size(), 2u);  // a is already committed; b goes through
}

TEST_F(CliTest, OracleFailureDoesNotBlockTheSession) {
  const std::string session = path("s.json");
  ASSERT_EQ(run("session new --session " + session).status, 0);
  std::ofstream(path("in.jsonl")) << R"({"actor":"respondent","kind":"commit","id":"a","text":"t"})" "\n";
  const Invocation r = run("session step --session " + session + " --oracle-endpoint http://127.0.0.1:1/none",
                    path("in.jsonl"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(load_session_file(session).events.size(), 1u);
  EXPECT_EQ(run("session step --session " + session + " --oracle-endpoint https://x --oracle-script " +
                fixture("oracle_script.json"))
                .status,
            2);
}
