#include <gtest/gtest.h>

#include "elenchus/dialectic.hpp"
#include "elenchus/provo.hpp"
#include "support/events.hpp"
#include "support/protocol_fuzz.hpp"

using namespace elenchus;
using build::atoms;
using build::Log;
using build::refine;
using build::retraction;

namespace {

// Code of the error raised by the last event of `log`, after the others
// replayed cleanly.
std::string last_event_error(const Log& log) {
  const auto& all = log.events();
  DialecticalState s = replay({all.begin(), all.end() - 1});
  try {
    apply_event_in_place(s, all.back());
  } catch (const Error& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST(Apply, RefinementInsertsEndorsedImplication) {
  Log log;
  log.commit("p2").tension("tension-11", atoms({"p2"}), {}).accept(
      "tension-11", refine("p18", Side::Commit, EndorsedSequent{atoms({"p2"}), atoms({"p18"})}));
  const DialecticalState s = log.state();
  ASSERT_EQ(s.implications.size(), 1u);
  EXPECT_EQ(s.implications[0].text(), "p2 |- p18");
  EXPECT_EQ(s.implications[0].provenance, "tension-11");
  EXPECT_TRUE(s.position.commitments.contains(AtomId("p2")));
  EXPECT_TRUE(s.position.commitments.contains(AtomId("p18")));
  EXPECT_TRUE(s.open_tensions.empty());
  EXPECT_EQ(s.closed_tensions.at("tension-11").status, Tension::Status::Accepted);
}

TEST(Apply, ContestLeavesIUnchanged) {
  Log ok;
  ok.commit("a").commit("b").deny("c").tension("t1", atoms({"a", "b"}), atoms({"c"})).tension("t2", atoms({"b"}), atoms({"c"}));
  ok.accept("t1", refine("d", Side::Commit, EndorsedSequent{atoms({"a"}), atoms({"d"})}));
  const auto before = ok.state().implications;
  ok.contest("t2");
  const DialecticalState s = ok.state();
  EXPECT_EQ(s.implications.size(), before.size());
  EXPECT_TRUE(s.open_tensions.empty());
  EXPECT_EQ(s.closed_tensions.at("t2").status, Tension::Status::Contested);
}

TEST(Apply, DefaultEndorsementIsTheTensionItself) {
  Log log;
  log.commit("a").deny("c").tension("t1", atoms({"a"}), atoms({"c"})).accept("t1", refine("d", Side::Deny));
  const DialecticalState s = log.state();
  ASSERT_EQ(s.implications.size(), 1u);
  EXPECT_EQ(s.implications[0].text(), "a |- c");
  EXPECT_TRUE(s.position.denials.contains(AtomId("d")));
}

TEST(Apply, RetractionLeavesNoResidue) {
  Log log;
  log.commit("p7").tension("f", atoms({"p7"}), {}).accept(
      "f", refine("p20", Side::Commit, EndorsedSequent{atoms({"p7"}), atoms({"p20"})}));
  ASSERT_EQ(log.state().implications.size(), 1u);
  log.retract("p20");
  const DialecticalState s = log.state();
  EXPECT_FALSE(s.position.commitments.contains(AtomId("p20")));
  EXPECT_FALSE(s.is_active(AtomId("p20")));
  EXPECT_TRUE(s.implications.empty());
  ASSERT_EQ(s.pruned.size(), 1u);
  EXPECT_EQ(s.pruned[0].implication.text(), "p7 |- p20");
  EXPECT_EQ(s.pruned[0].seq, 4u);
  EXPECT_FALSE(extract_base(s).declares(AtomId("p20")));
}

TEST(Apply, RetractionShrinksOrDropsOpenTensions) {
  Log log;
  log.commit("a").commit("b").deny("c").tension("t1", atoms({"a", "b"}), {}).tension("t2", atoms({"a"}), {});
  log.retract("a");
  const DialecticalState s = log.state();
  ASSERT_TRUE(s.open_tensions.contains("t1"));
  EXPECT_EQ(s.open_tensions.at("t1").lhs, atoms({"b"}));
  EXPECT_FALSE(s.open_tensions.contains("t2"));
  EXPECT_TRUE(s.dropped_tensions.contains("t2"));
  log.accept("t2", retraction(atoms({"b"})));
  EXPECT_EQ(last_event_error(log), "StaleTension");
}

TEST(Apply, RetractingResolutionPrunesDefaultSequent) {
  Log log;
  log.commit("a").commit("b").tension("t", atoms({"a", "b"}), {}).accept("t", retraction(atoms({"b"})));
  const DialecticalState s = log.state();
  EXPECT_TRUE(s.implications.empty());
  ASSERT_EQ(s.pruned.size(), 1u);
  EXPECT_EQ(s.pruned[0].implication.text(), "a, b |-");
  EXPECT_EQ(s.pruned[0].retracted, AtomId("b"));
}

TEST(Apply, ConsistencyTension) {
  Log log;
  log.commit("a").tension("t", atoms({"a"}), atoms({"a"}));
  EXPECT_EQ(log.state().open_tensions.at("t").type(), TensionType::Consistency);
  log.tension("u", atoms({"a"}), {});
  EXPECT_EQ(log.state().open_tensions.at("u").type(), TensionType::Contrariety);
}

TEST(Apply, ChallengesAreBookkeeping) {
  Log log;
  log.commit("a").challenge("c1", atoms({"a"})).resolve("c1", "answered");
  const DialecticalState s = log.state();
  EXPECT_EQ(s.challenges.at("c1").status, Challenge::Status::Resolved);
  EXPECT_EQ(s.challenges.at("c1").note, "answered");
  EXPECT_TRUE(s.implications.empty());
  EXPECT_TRUE(s.open_challenges().empty());
}

TEST(Apply, ContestedTensionMayReturnUnderNewId) {
  Log log;
  log.commit("a").tension("t", atoms({"a"}), {}).contest("t").tension("t", atoms({"a"}), {});
  EXPECT_EQ(last_event_error(log), "DuplicateTensionId");
  Log again;
  again.commit("a").tension("t", atoms({"a"}), {}).contest("t").tension("t-2", atoms({"a"}), {});
  EXPECT_TRUE(again.state().open_tensions.contains("t-2"));
}

TEST(Errors, Codes) {
  EXPECT_EQ(last_event_error(Log().commit("a").deny("a")), "BilateralViolation");
  EXPECT_EQ(last_event_error(Log().deny("a").commit("a")), "BilateralViolation");
  EXPECT_EQ(last_event_error(Log().commit("a").commit("a")), "DuplicateAtomId");
  EXPECT_EQ(last_event_error(Log().commit("a").retract("a").commit("a")), "DuplicateAtomId");
  EXPECT_EQ(last_event_error(Log().commit("a", "")), "InvalidProposition");
  EXPECT_EQ(last_event_error(Log().retract("a")), "UnknownAtom");
  EXPECT_EQ(last_event_error(Log().commit("a").retract("a").retract("a")), "NotActive");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", atoms({"b"}), {})), "UnknownAtom");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", {}, {})), "InvalidTension");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", {}, atoms({"a"}))), "InvalidTension");
  EXPECT_EQ(last_event_error(Log().accept("t", retraction(atoms({"a"})))), "UnknownTension");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", atoms({"a"}), {}).contest("t").contest("t")),
            "DoubleResolution");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", atoms({"a"}), {}).accept("t", retraction({}))),
            "InvalidResolution");
  EXPECT_EQ(last_event_error(Log().commit("a").commit("b").tension("t", atoms({"a"}), {}).accept("t", retraction(atoms({"b"})))),
            "InvalidResolution");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", atoms({"a"}), {}).accept(
                "t", Resolution{Resolution::Kind::Refine, {}, std::nullopt, std::nullopt})),
            "InvalidResolution");
  EXPECT_EQ(last_event_error(Log().commit("a").tension("t", atoms({"a"}), {}).accept(
                "t", refine("b", Side::Commit, EndorsedSequent{atoms({"a"}), atoms({"b"})}, atoms({"a"})))),
            "StaleTension");
  EXPECT_EQ(last_event_error(Log().commit("a").challenge("c", atoms({"a"})).challenge("c", atoms({"a"}))),
            "DuplicateChallengeId");
  EXPECT_EQ(last_event_error(Log().resolve("c")), "UnknownChallenge");
  EXPECT_EQ(last_event_error(Log().commit("a").challenge("c", atoms({"a"})).resolve("c").resolve("c")),
            "DoubleResolution");
}

TEST(Errors, ActorDiscipline) {
  Log wrong;
  wrong.add(Actor::Opponent, events::Commit{AtomId("a"), "x"});
  EXPECT_EQ(last_event_error(wrong), "ActorViolation");
  Log log;
  log.commit("a").tension("t", atoms({"a"}), {});
  log.add(Actor::Opponent, events::AcceptTension{"t", retraction(atoms({"a"}))});
  EXPECT_EQ(last_event_error(log), "ActorViolation");
  Log self;
  self.commit("a").add(Actor::Respondent, events::ProposeTension{"t", atoms({"a"}), {}, "self"});
  EXPECT_EQ(last_event_error(self), "ActorViolation");
}

TEST(Errors, SequenceGapAndStateUntouched) {
  DialecticalState s = Log().commit("a").state();
  const DialecticalState copy = s;
  EXPECT_THROW(apply_event_in_place(s, DialecticEvent{3, "", Actor::Respondent, events::Commit{AtomId("b"), "b"}}), Error);
  EXPECT_EQ(s.last_seq, copy.last_seq);
  EXPECT_EQ(s.propositions.size(), copy.propositions.size());
}

TEST(Replay, EmptyAndBilateralIndex) {
  const DialecticalState empty = replay({});
  EXPECT_EQ(empty.last_seq, 0u);
  EXPECT_TRUE(empty.propositions.empty());
  try {
    Log().commit("a").deny("a").state();
    FAIL();
  } catch (const EventError& e) {
    EXPECT_EQ(e.code(), "BilateralViolation");
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Replay, ProvoSession) {
  const DialecticalState s = replay(provo::session().events);
  EXPECT_EQ(s.position.commitments.size(), 19u);
  EXPECT_TRUE(s.position.denials.empty());
  EXPECT_TRUE(s.open_tensions.empty());
  EXPECT_EQ(s.implications.size(), 9u);
  EXPECT_EQ(s.last_seq, 46u);
  EXPECT_FALSE(s.is_active(AtomId("p20")));
  ASSERT_EQ(s.pruned.size(), 1u);
  EXPECT_EQ(s.pruned[0].implication.text(), "p7 |- p20");
  EXPECT_TRUE(s.open_challenges().empty());
  EXPECT_EQ(save_base(extract_base(s)), provo::base_document());
}

TEST(Replay, ProvoNoResidueQueries) {
  const MaterialBase b = extract_base(replay(provo::session().events));
  EXPECT_FALSE(derivable(b, parse_sequent("p7 |- p18")).derivable);
  EXPECT_FALSE(derivable(b, parse_sequent("p7 |- p23")).derivable);
  EXPECT_TRUE(derivable(b, parse_sequent("p18 |- p23")).derivable);
}

TEST(Replay, Deterministic) {
  const auto events = provo::session().events;
  EXPECT_TRUE(extract_base(replay(events)) == extract_base(replay(events)));
}

TEST(ExtractBase, EmptyAndOpenTensions) {
  const MaterialBase empty = extract_base(DialecticalState{});
  EXPECT_TRUE(empty.atoms().empty());
  EXPECT_TRUE(empty.implications().empty());
  const MaterialBase open = extract_base(Log().commit("a").tension("t", atoms({"a"}), {}).state());
  EXPECT_EQ(open.atoms(), atoms({"a"}));
  EXPECT_TRUE(open.implications().empty());
}

TEST(Fuzz, ProtocolInvariants) {
  const auto r = fuzz::protocol(1000);
  EXPECT_EQ(r.outcome.cases, 1000u);
  EXPECT_TRUE(r.outcome.ok()) << *r.outcome.counterexample;
  // The generator must actually exercise the interesting paths.
  EXPECT_GT(r.totals.accepts, 1000u);
  EXPECT_GT(r.totals.retractions, 500u);
  EXPECT_GT(r.totals.proposals, 1000u);
  EXPECT_GT(r.totals.events_rejected, 1000u);
}
