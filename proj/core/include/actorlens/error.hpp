#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace actorlens {

// Machine-readable failure categories shared by every module. The API maps
// these onto HTTP status codes and the CLI onto exit codes.
enum class ErrorCode {
  malformed_document,
  schema_violation,
  invariant_violation,
  unknown_player,
  unknown_match,
  unknown_member,
  unknown_target,
  unknown_session,
  unknown_anchor,
  empty_selection,
  bad_script,
  bad_window,
  bad_filter,
  too_few_points,
  bad_request,
  io_failure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string path, const std::string& message)
      : std::runtime_error(message), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace actorlens
