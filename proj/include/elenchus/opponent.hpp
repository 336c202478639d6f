#pragma once

// The opponent is a defeasible derivability oracle: it proposes tensions,
// challenges and candidate propositions. Nothing it says reaches the log
// unscreened, and nothing it says can enter I; only a respondent's
// accept_tension does that.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elenchus/dialectic.hpp"
#include "elenchus/json_codec.hpp"

namespace elenchus {

struct ProposedTension {
  std::optional<std::string> id;  // assigned on recording when absent
  AtomSet lhs;
  AtomSet rhs;
  std::string rationale;
};

struct ProposedChallenge {
  std::optional<std::string> id;
  std::string question;
  AtomSet targets;
};

struct ProposedProposition {
  AtomId id;
  std::string text;
  Side suggested_side = Side::Commit;
};

struct OpponentProposal {
  std::vector<ProposedTension> tensions;
  std::vector<ProposedChallenge> challenges;
  std::vector<ProposedProposition> new_propositions;

  bool empty() const { return tensions.empty() && challenges.empty() && new_propositions.empty(); }
};

// {"tensions": [{"id"?, "lhs", "rhs", "rationale"}],
//  "challenges": [{"id"?, "question", "targets"}],
//  "newPropositions": [{"id", "text", "suggestedSide": "commit"|"deny"}]}
json proposal_to_json(const OpponentProposal& p);
// Throws MalformedResponse when `j` does not match the schema. Missing
// arrays are treated as empty.
OpponentProposal proposal_from_json(const json& j);

struct Discard {
  std::string item;    // "tension 0", "challenge 1", "proposition p18"
  std::string reason;
};

struct ScreenedProposal {
  OpponentProposal accepted;
  std::vector<Discard> discarded;
};

// Keeps the items that are legal against `state` once the proposal's own new
// propositions are adopted on their suggested sides; records every discard.
ScreenedProposal screen_proposal(const DialecticalState& state, const OpponentProposal& proposal);

struct RecordedProposal {
  std::vector<DialecticEvent> events;        // opponent events, ready to append
  std::vector<ProposedTension> deferred;     // need new propositions adopted first
};

// Turns a screened proposal into opponent events numbered from
// state.last_seq + 1: challenges first, then tensions that are legal in the
// current state. Missing ids become "challenge-<seq>" / "tension-<seq>".
RecordedProposal record_proposal(const DialecticalState& state, const ScreenedProposal& screened,
                                 const std::string& timestamp);

// ---------------------------------------------------------------------------

class Oracle {
 public:
  virtual ~Oracle() = default;

  // Throws OracleUnavailable or MalformedResponse.
  virtual OpponentProposal propose(const DialecticalState& state, std::span<const DialecticEvent> transcript) = 0;

  // Candidate propositions for the respondent to confirm. Throws EmptyDocument
  // on blank input, OracleUnavailable on transport failure.
  virtual std::vector<PropositionRecord> extract_commitments(std::string_view source_text) = 0;

  // Best effort; an in-flight call notices at its next retry boundary.
  virtual void cancel() {}
};

// Deterministic adapter driven by a script file:
//   {"commitments": [{"id", "text"}],
//    "entries": [{"trigger": <last applied seq>, "proposal": {...}}]}
// propose() returns the proposal whose trigger equals state.last_seq, or an
// empty proposal when the script has none.
class ScriptedOracle : public Oracle {
 public:
  ScriptedOracle(std::vector<PropositionRecord> commitments, std::map<std::uint64_t, OpponentProposal> entries);

  static ScriptedOracle from_json(const json& script);
  static ScriptedOracle load(std::string_view document);
  static ScriptedOracle load_file(const std::string& path);

  OpponentProposal propose(const DialecticalState& state, std::span<const DialecticEvent> transcript) override;
  std::vector<PropositionRecord> extract_commitments(std::string_view source_text) override;

  std::uint64_t last_trigger() const;

 private:
  std::vector<PropositionRecord> commitments_;
  std::map<std::uint64_t, OpponentProposal> entries_;
};

struct OracleConfig {
  std::string endpoint;  // http://host:port/path
  std::string credential_env = "ELENCHUS_ORACLE_KEY";  // name only; the value is read at call time
  std::string header_name = "Authorization";
  std::string header_template = "Bearer {credential}";
  double timeout_seconds = 30.0;
  int retries = 2;  // additional attempts after the first
  std::string model;
  std::size_t transcript_window = 20;
};

// Serialized without any credential value.
json oracle_config_to_json(const OracleConfig& c);
OracleConfig oracle_config_from_json(const json& j);

// The request preamble sent with every propose() call.
extern const char* const kOpponentInstructions;

// Provider-agnostic HTTP adapter. One POST per call carrying the instruction
// preamble, serialized position, open tensions and the last N events; the
// response must be one JSON object matching OpponentProposal. A malformed
// response gets a single reformat retry before MalformedResponse.
class HttpOracle : public Oracle {
 public:
  explicit HttpOracle(OracleConfig config);

  OpponentProposal propose(const DialecticalState& state, std::span<const DialecticEvent> transcript) override;
  std::vector<PropositionRecord> extract_commitments(std::string_view source_text) override;
  void cancel() override { cancelled_ = true; }

  const OracleConfig& config() const noexcept { return config_; }
  json build_request(const DialecticalState& state, std::span<const DialecticEvent> transcript) const;

 private:
  // Returns the response body; throws OracleUnavailable after retries.
  std::string post(const json& body);

  OracleConfig config_;
  std::atomic<bool> cancelled_{false};
};

}  // namespace elenchus
