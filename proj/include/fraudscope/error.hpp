#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fraudscope {

enum class ErrorCode {
  ingest,     // unreadable input stream
  config,     // invalid configuration document or option
  argument,   // caller passed an out-of-contract argument
  storage,    // store or file write failure
  not_found,  // unknown client, frame, ...
  query,      // malformed query expression
  internal,   // violated internal precondition
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ingest: return "ingest_error";
    case ErrorCode::config: return "config_error";
    case ErrorCode::argument: return "argument_error";
    case ErrorCode::storage: return "storage_error";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::query: return "query_error";
    case ErrorCode::internal: return "internal_error";
  }
  return "internal_error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fraudscope
