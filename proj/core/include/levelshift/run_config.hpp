#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "levelshift/ground_engines.hpp"
#include "levelshift/models.hpp"

namespace levelshift {

enum class Command { solve, excited, ladder, dft_scan, verify };

std::string_view to_string(Command command) noexcept;
Command command_from_string(std::string_view name);

/// A complete, replayable description of one run. Exactly one of `model`
/// and `matrix_file` is set.
struct RunConfig {
  Command command = Command::solve;
  std::optional<ModelSpec> model;
  std::optional<std::string> matrix_file;
  bool matrix_sparse = false;
  SolverConfig solver;
  int k = 1;
  std::string output_path = "report.json";
  std::optional<double> shift_override;
  /// dft-scan: grid points per site coordinate.
  int scan_points = 11;
  /// verify: random unit vectors per lower-bound check.
  int verify_samples = 1000;
  /// Include eigenvectors (as [re, im] arrays) in reports.
  bool export_vectors = false;

  /// Throws config_error naming the key and the violated constraint.
  void validate() const;
};

/// Parses a JSON config document, fills defaults and validates. Unknown
/// keys are rejected.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& j);

/// Full config with every default spelled out; parse_config(to_json(c))
/// reproduces c.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const SolverConfig& cfg);

}  // namespace levelshift
