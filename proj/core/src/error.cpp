#include "levelshift/error.hpp"

namespace levelshift {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::hermiticity_violation: return "hermiticity_violation";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::dense_limit_exceeded: return "dense_limit_exceeded";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::shift_rejected: return "shift_rejected";
    case ErrorCode::escalation_exhausted: return "escalation_exhausted";
    case ErrorCode::spectrum_exhausted: return "spectrum_exhausted";
    case ErrorCode::empty_search_space: return "empty_search_space";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace levelshift
