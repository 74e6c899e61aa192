// levelshift: command-line front end for the deflation library.
//
//   levelshift <solve|excited|ladder|dft-scan|verify> --config run.json
//              [--out report.json] [--seed N] [--k N] [--shift K]
//   levelshift export-matrix --config run.json --out matrix.mtx

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "levelshift/error.hpp"
#include "levelshift/matrix_market.hpp"
#include "levelshift/models.hpp"
#include "levelshift/run_config.hpp"
#include "levelshift/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<double> shift;
};

json read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw levelshift::Error(levelshift::ErrorCode::io_error, "cannot open config " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw levelshift::Error(levelshift::ErrorCode::parse_error,
                            "config is not valid JSON: " + std::string(e.what()));
  }
}

levelshift::RunConfig load(const std::string& command, const Overrides& o) {
  json j = read_config(o.config_path);
  if (!j.is_object()) {
    throw levelshift::Error(levelshift::ErrorCode::config_error, "config: must be an object");
  }
  if (!command.empty()) j["command"] = command;
  // Matrix paths are relative to the config file.
  if (j.contains("matrix_file") && j["matrix_file"].is_string()) {
    fs::path p = j["matrix_file"].get<std::string>();
    if (p.is_relative()) p = fs::absolute(fs::path(o.config_path)).parent_path() / p;
    j["matrix_file"] = p.lexically_normal().string();
  }
  if (o.out) j["output_path"] = *o.out;
  if (o.k) j["k"] = *o.k;
  if (o.shift) j["shift_override"] = *o.shift;
  if (o.seed) {
    if (!j.contains("solver")) j["solver"] = json::object();
    j["solver"]["seed"] = *o.seed;
  }
  return levelshift::config_from_json(j);
}

int execute(const std::string& command, const Overrides& o) {
  const levelshift::RunConfig config = load(command, o);
  const levelshift::RunReport report = levelshift::run_and_write(config);
  const auto& doc = report.document;
  std::cerr << command << ": " << doc.value("status", "unknown");
  if (doc.contains("error")) std::cerr << " (" << doc["error"].value("message", "") << ")";
  std::cerr << ", report written to " << config.output_path << '\n';
  return report.exit_code;
}

int export_matrix(const Overrides& o) {
  json j = read_config(o.config_path);
  if (!j.is_object() || !j.contains("model")) {
    throw levelshift::Error(levelshift::ErrorCode::config_error,
                            "model: export-matrix needs a config with a model");
  }
  j["command"] = "solve";
  j.erase("matrix_file");
  const levelshift::RunConfig config = levelshift::config_from_json(j);
  const std::string out = o.out.value_or("matrix.mtx");
  levelshift::save_matrix(out, levelshift::build(*config.model));
  std::cerr << "export-matrix: wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excited states as ground states of level-shifted operators"};
  app.set_version_flag("--version", std::string(levelshift::library_version()));
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&](CLI::App* sub, bool run_flags) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->required();
    sub->add_option("--out", o.out, "output path (overrides output_path)");
    if (run_flags) {
      sub->add_option("--seed", o.seed, "solver seed");
      sub->add_option("--k", o.k, "ladder depth");
      sub->add_option("--shift", o.shift, "level shift K (disables escalation)");
    }
  };
  for (const char* name : {"solve", "excited", "ladder", "dft-scan", "verify"}) {
    add_common(app.add_subcommand(name, std::string("run ") + name), true);
  }
  add_common(app.add_subcommand("export-matrix", "write the model operator as MatrixMarket"), false);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "export-matrix") return export_matrix(o);
    return execute(command, o);
  } catch (const levelshift::Error& e) {
    std::cerr << "levelshift: " << e.what() << '\n';
    return 2;
  }
}
