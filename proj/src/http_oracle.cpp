#include <chrono>
#include <cstdlib>
#include <regex>

#include <httplib.h>

#include "elenchus/opponent.hpp"
#include "elenchus/session_io.hpp"

namespace elenchus {

const char* const kOpponentInstructions =
    "You are the opponent in a bilateral dialectic. The respondent holds a position of commitments (C) "
    "and denials (D), each an atomic proposition with an id. Propose tensions: subsets lhs of C and rhs "
    "of D that cannot jointly be held, each with a one-line rationale. You may also raise challenges "
    "(a question aimed at existing propositions) and suggest new propositions with fresh ids and a "
    "suggestedSide of \"commit\" or \"deny\". Reply with exactly one JSON object of the form "
    "{\"tensions\":[{\"lhs\":[],\"rhs\":[],\"rationale\":\"\"}],\"challenges\":[{\"question\":\"\",\"targets\":[]}],"
    "\"newPropositions\":[{\"id\":\"\",\"text\":\"\",\"suggestedSide\":\"commit\"}]} and nothing else.";

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  static const std::regex re(R"(^(http://[^/\s]+)(/[^\s]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error("ConfigError", "oracle endpoint must be http://host[:port][/path]: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

std::chrono::microseconds to_micros(double seconds) {
  return std::chrono::microseconds(static_cast<long long>(seconds * 1e6));
}

json position_to_json(const DialecticalState& state) {
  auto side = [&](const AtomSet& atoms) {
    json out = json::array();
    for (const auto& a : atoms) out.push_back({{"id", a.name()}, {"text", state.propositions.at(a).text}});
    return out;
  };
  return {{"commitments", side(state.position.commitments)}, {"denials", side(state.position.denials)}};
}

}  // namespace

json oracle_config_to_json(const OracleConfig& c) {
  return {{"endpoint", c.endpoint},       {"credentialEnv", c.credential_env},
          {"headerName", c.header_name},  {"headerTemplate", c.header_template},
          {"timeoutSeconds", c.timeout_seconds}, {"retries", c.retries},
          {"model", c.model},             {"transcriptWindow", c.transcript_window}};
}

OracleConfig oracle_config_from_json(const json& j) {
  if (!j.is_object()) throw Error("FormatError", "oracle config must be a JSON object");
  OracleConfig c;
  c.endpoint = require_string(j, "endpoint");
  try {
    c.credential_env = j.value("credentialEnv", c.credential_env);
    c.header_name = j.value("headerName", c.header_name);
    c.header_template = j.value("headerTemplate", c.header_template);
    c.timeout_seconds = j.value("timeoutSeconds", c.timeout_seconds);
    c.retries = j.value("retries", c.retries);
    c.model = j.value("model", c.model);
    c.transcript_window = j.value("transcriptWindow", c.transcript_window);
  } catch (const json::exception& e) {
    throw Error("FormatError", std::string("oracle config: ") + e.what());
  }
  if (c.timeout_seconds <= 0) throw Error("FormatError", "timeoutSeconds must be positive");
  if (c.retries < 0) throw Error("FormatError", "retries must be non-negative");
  return c;
}

HttpOracle::HttpOracle(OracleConfig config) : config_(std::move(config)) { split_endpoint(config_.endpoint); }

json HttpOracle::build_request(const DialecticalState& state, std::span<const DialecticEvent> transcript) const {
  const std::size_t n = std::min(transcript.size(), config_.transcript_window);
  json events = json::array();
  for (const auto& e : transcript.subspan(transcript.size() - n)) events.push_back(event_to_json(e));
  json tensions = json::array();
  for (const auto& [id, t] : state.open_tensions) tensions.push_back(tension_to_json(t));
  return {{"task", "propose"},
          {"instructions", kOpponentInstructions},
          {"model", config_.model},
          {"position", position_to_json(state)},
          {"openTensions", std::move(tensions)},
          {"transcript", std::move(events)}};
}

std::string HttpOracle::post(const json& body) {
  const Endpoint ep = split_endpoint(config_.endpoint);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(to_micros(config_.timeout_seconds));
  client.set_read_timeout(to_micros(config_.timeout_seconds));
  client.set_write_timeout(to_micros(config_.timeout_seconds));

  httplib::Headers headers;
  if (const char* credential = std::getenv(config_.credential_env.c_str()); credential && *credential) {
    std::string value = config_.header_template;
    if (auto at = value.find("{credential}"); at != std::string::npos) value.replace(at, 12, credential);
    headers.emplace(config_.header_name, value);
  }

  const std::string payload = body.dump();
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (cancelled_) throw Error("OracleUnavailable", "oracle call cancelled");
    auto res = client.Post(ep.path, headers, payload, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
    } else if (res->status / 100 != 2) {
      last_failure = "HTTP " + std::to_string(res->status);
    } else {
      return res->body;
    }
  }
  throw Error("OracleUnavailable",
              "oracle unavailable after " + std::to_string(config_.retries + 1) + " attempt(s): " + last_failure);
}

OpponentProposal HttpOracle::propose(const DialecticalState& state, std::span<const DialecticEvent> transcript) {
  cancelled_ = false;
  json request = build_request(state, transcript);
  std::string body = post(request);
  for (int attempt = 0;; ++attempt) {
    std::string problem;
    try {
      return proposal_from_json(json::parse(body));
    } catch (const json::parse_error& e) {
      problem = std::string("response is not JSON: ") + e.what();
    } catch (const Error& e) {
      if (e.code() != "MalformedResponse") throw;
      problem = e.what();
    }
    if (attempt == 1) throw Error("MalformedResponse", problem);
    request["task"] = "reformat";
    request["previousResponse"] = body;
    request["problem"] = problem;
    body = post(request);
  }
}

std::vector<PropositionRecord> HttpOracle::extract_commitments(std::string_view source_text) {
  if (source_text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw Error("EmptyDocument", "source document is empty");
  cancelled_ = false;
  const json request = {{"task", "extract_commitments"},
                        {"model", config_.model},
                        {"document", std::string(source_text)},
                        {"reply", "{\"propositions\":[{\"id\":\"p1\",\"text\":\"...\"}]}"}};
  const std::string body = post(request);
  try {
    const json j = json::parse(body);
    std::vector<PropositionRecord> out;
    for (const auto& p : j.at("propositions")) {
      const std::string id = p.at("id").get<std::string>();
      if (!is_valid_atom_name(id)) throw Error("MalformedResponse", "invalid proposition id '" + id + "'");
      out.push_back({AtomId(id), p.at("text").get<std::string>(), PropositionRecord::Status::Active});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error("MalformedResponse", std::string("extraction response: ") + e.what());
  }
}

}  // namespace elenchus
