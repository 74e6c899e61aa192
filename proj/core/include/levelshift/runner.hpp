#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "levelshift/run_config.hpp"

namespace levelshift {

std::string_view library_version() noexcept;

/// SHA-256 (hex) of a byte string.
std::string sha256_hex(std::string_view bytes);

struct RunReport {
  nlohmann::json document;
  /// 0 iff every solve converged, every shift verdict is valid and every
  /// invoked theorem check passed.
  int exit_code = 1;
};

/// Executes the run. Module errors are caught and turned into a failure
/// report with nonzero exit code; nothing is written to disk.
RunReport run(const RunConfig& config);

/// run() and then write the report to config.output_path.
RunReport run_and_write(const RunConfig& config);

}  // namespace levelshift
