#pragma once

// HTTP facade over sessions and the prover. Each session is one JSON file
// under the data directory holding its event log; an event is acknowledged
// only after the file has been rewritten and synced.
//
//   GET    /sessions                      list
//   POST   /sessions                      {name} -> 201 {sessionId}
//   GET    /sessions/{id}                 state snapshot
//   GET    /sessions/{id}/events          session document
//   POST   /sessions/{id}/events          event without seq -> 201 event | 409
//   POST   /sessions/{id}/oracle          -> 202, one call in flight per session
//   GET    /sessions/{id}/proposals       {status: none|pending|ready|failed, ...}
//   DELETE /sessions/{id}/proposals       cancel the call in flight
//   GET    /sessions/{id}/base            extract_base
//   GET    /sessions/{id}/analysis        containment audit, gaps, defeats
//   GET    /sessions/{id}/issues          issue-style export
//   POST   /prove                         {base | sessionId, sequent, proof?, budget?}

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "elenchus/opponent.hpp"

namespace elenchus {

struct ServiceConfig {
  std::string data_dir;
  // Called once per oracle request; empty means no oracle (503).
  std::function<std::unique_ptr<Oracle>()> oracle_factory;
  std::size_t transcript_window = 20;
};

class Service {
 public:
  explicit Service(ServiceConfig config);  // loads existing sessions from data_dir
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error("BindError").
  int bind(const std::string& host, int port);
  void run();   // blocks until stop()
  void stop();

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" -> {host, port}; throws Error("ConfigError").
std::pair<std::string, int> parse_listen_address(const std::string& addr);

// Current UTC time as 2025-06-02T09:00:00Z.
std::string utc_timestamp();

}  // namespace elenchus
