#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levelshift {

enum class ErrorCode {
  dimension_mismatch,
  hermiticity_violation,
  invalid_argument,
  rank_deficient,
  dense_limit_exceeded,
  not_converged,
  shift_rejected,
  escalation_exhausted,
  spectrum_exhausted,
  empty_search_space,
  unsupported,
  infeasible,
  parse_error,
  io_error,
  config_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so
/// the runner can turn it into a structured report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace levelshift
