#include "actorlens/error.hpp"

namespace actorlens {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_document: return "malformed_document";
    case ErrorCode::schema_violation: return "schema_violation";
    case ErrorCode::invariant_violation: return "invariant_violation";
    case ErrorCode::unknown_player: return "unknown_player";
    case ErrorCode::unknown_match: return "unknown_match";
    case ErrorCode::unknown_member: return "unknown_member";
    case ErrorCode::unknown_target: return "unknown_target";
    case ErrorCode::unknown_session: return "unknown_session";
    case ErrorCode::unknown_anchor: return "unknown_anchor";
    case ErrorCode::empty_selection: return "empty_selection";
    case ErrorCode::bad_script: return "bad_script";
    case ErrorCode::bad_window: return "bad_window";
    case ErrorCode::bad_filter: return "bad_filter";
    case ErrorCode::too_few_points: return "too_few_points";
    case ErrorCode::bad_request: return "bad_request";
    case ErrorCode::io_failure: return "io_failure";
  }
  return "unknown";
}

}  // namespace actorlens
