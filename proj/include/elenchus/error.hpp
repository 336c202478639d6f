#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace elenchus {

// Every failure the engine reports carries a stable code ("BilateralViolation",
// "SyntaxError", ...). The code is what crosses process boundaries (HTTP bodies,
// --json CLI output); the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Parse failures point at the byte offset where the input went wrong.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message, std::string code = "SyntaxError")
      : Error(std::move(code), message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Raised while replaying or applying an event; index is 0-based into the log.
class EventError : public Error {
 public:
  EventError(const Error& cause, std::size_t index)
      : Error(cause.code(), "event " + std::to_string(index + 1) + ": " + cause.what()),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace elenchus
