#include "levelshift/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "levelshift/error.hpp"

namespace levelshift {

using nlohmann::json;

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::solve: return "solve";
    case Command::excited: return "excited";
    case Command::ladder: return "ladder";
    case Command::dft_scan: return "dft-scan";
    case Command::verify: return "verify";
  }
  return "unknown";
}

Command command_from_string(std::string_view name) {
  if (name == "solve") return Command::solve;
  if (name == "excited") return Command::excited;
  if (name == "ladder") return Command::ladder;
  if (name == "dft-scan") return Command::dft_scan;
  if (name == "verify") return Command::verify;
  throw Error(ErrorCode::config_error,
              "command: unknown value '" + std::string(name) +
                  "' (expected solve, excited, ladder, dft-scan, verify)");
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::config_error, key + ": " + what);
}

void require_object(const json& j, const std::string& key) {
  if (!j.is_object()) fail(key, "must be an object");
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "must be a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& key) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) {
      return static_cast<long long>(v);
    }
  }
  fail(key, "must be an integer");
}

int get_int(const json& j, const std::string& key) {
  const long long v = get_integer(j, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(key, "out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t get_u64(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const long long v = get_integer(j, key);
  if (v < 0) fail(key, "must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) fail(key, "must be a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) fail(key, "must be a boolean");
  return j.get<bool>();
}

ModelSpec model_from_json(const json& j) {
  require_object(j, "model");
  reject_unknown(j, "model",
                 {"kind", "sites", "params", "boundary", "particle_number",
                  "external_potential", "sector"});
  ModelSpec m;
  if (!j.contains("kind")) fail("model.kind", "required");
  m.kind = model_kind_from_string(get_string(j.at("kind"), "model.kind"));
  if (!j.contains("sites")) fail("model.sites", "required");
  m.sites = get_int(j.at("sites"), "model.sites");
  if (j.contains("params")) {
    const json& p = j.at("params");
    require_object(p, "model.params");
    reject_unknown(p, "model.params", {"t", "U", "J", "seed"});
    for (const auto& [key, value] : p.items()) {
      const std::string name = "model.params." + key;
      if (key == "seed") {
        m.params[key] = static_cast<double>(get_u64(value, name));
      } else {
        m.params[key] = get_number(value, name);
      }
    }
  }
  if (j.contains("boundary")) {
    m.boundary = boundary_from_string(get_string(j.at("boundary"), "model.boundary"));
  }
  if (j.contains("particle_number")) {
    m.particle_number = get_int(j.at("particle_number"), "model.particle_number");
  }
  if (j.contains("external_potential")) {
    const json& v = j.at("external_potential");
    if (!v.is_array()) fail("model.external_potential", "must be an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      m.external_potential.push_back(
          get_number(v[i], "model.external_potential[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("sector")) {
    m.sector = sector_from_string(get_string(j.at("sector"), "model.sector"));
  }
  return m;
}

SolverConfig solver_from_json(const json& j) {
  require_object(j, "solver");
  reject_unknown(j, "solver",
                 {"engine", "residual_tol", "max_iterations", "seed", "degeneracy_gap_tol",
                  "dense_limit"});
  SolverConfig s;
  if (j.contains("engine")) s.engine = engine_from_string(get_string(j.at("engine"), "solver.engine"));
  if (j.contains("residual_tol")) s.residual_tol = get_number(j.at("residual_tol"), "solver.residual_tol");
  if (j.contains("max_iterations") && !j.at("max_iterations").is_null()) {
    s.max_iterations = get_int(j.at("max_iterations"), "solver.max_iterations");
  }
  if (j.contains("seed")) s.seed = get_u64(j.at("seed"), "solver.seed");
  if (j.contains("degeneracy_gap_tol")) {
    s.degeneracy_gap_tol = get_number(j.at("degeneracy_gap_tol"), "solver.degeneracy_gap_tol");
  }
  if (j.contains("dense_limit")) {
    s.dense_limit = static_cast<Index>(get_integer(j.at("dense_limit"), "solver.dense_limit"));
  }
  return s;
}

}  // namespace

void RunConfig::validate() const {
  if (model.has_value() == matrix_file.has_value()) {
    fail("model/matrix_file", "exactly one of them must be given");
  }
  if (model) model->validate();
  if (matrix_file && matrix_file->empty()) fail("matrix_file", "must not be empty");
  solver.validate();
  if (k < 1) fail("k", "must be >= 1");
  if (shift_override && !(*shift_override > 0.0 && std::isfinite(*shift_override))) {
    fail("shift_override", "must be a positive real");
  }
  if (scan_points < 2) fail("scan_points", "must be >= 2");
  if (verify_samples < 1) fail("verify_samples", "must be >= 1");
  if (output_path.empty()) fail("output_path", "must not be empty");
  if (command == Command::dft_scan && !model) {
    fail("model", "dft-scan needs a lattice model");
  }
}

RunConfig config_from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "",
                 {"command", "model", "matrix_file", "matrix_sparse", "solver", "k",
                  "output_path", "shift_override", "scan_points", "verify_samples",
                  "export_vectors"});
  RunConfig c;
  if (!j.contains("command")) fail("command", "required");
  c.command = command_from_string(get_string(j.at("command"), "command"));
  if (j.contains("model") && !j.at("model").is_null()) c.model = model_from_json(j.at("model"));
  if (j.contains("matrix_file") && !j.at("matrix_file").is_null()) {
    c.matrix_file = get_string(j.at("matrix_file"), "matrix_file");
  }
  if (j.contains("matrix_sparse")) c.matrix_sparse = get_bool(j.at("matrix_sparse"), "matrix_sparse");
  if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
  if (j.contains("k")) c.k = get_int(j.at("k"), "k");
  if (j.contains("output_path")) c.output_path = get_string(j.at("output_path"), "output_path");
  if (j.contains("shift_override") && !j.at("shift_override").is_null()) {
    c.shift_override = get_number(j.at("shift_override"), "shift_override");
  }
  if (j.contains("scan_points")) c.scan_points = get_int(j.at("scan_points"), "scan_points");
  if (j.contains("verify_samples")) {
    c.verify_samples = get_int(j.at("verify_samples"), "verify_samples");
  }
  if (j.contains("export_vectors")) {
    c.export_vectors = get_bool(j.at("export_vectors"), "export_vectors");
  }
  c.validate();
  return c;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

json to_json(const ModelSpec& m) {
  json params = json::object();
  for (const auto& [key, value] : m.params) {
    if (key == "seed") {
      params[key] = static_cast<std::uint64_t>(value);
    } else {
      params[key] = value;
    }
  }
  return {{"kind", std::string(to_string(m.kind))},
          {"sites", m.sites},
          {"params", std::move(params)},
          {"boundary", std::string(to_string(m.boundary))},
          {"particle_number", m.particle_number},
          {"external_potential", m.external_potential},
          {"sector", std::string(to_string(m.sector))}};
}

json to_json(const SolverConfig& s) {
  return {{"engine", std::string(to_string(s.engine))},
          {"residual_tol", s.residual_tol},
          {"max_iterations", s.max_iterations ? json(*s.max_iterations) : json(nullptr)},
          {"seed", s.seed},
          {"degeneracy_gap_tol", s.degeneracy_gap_tol},
          {"dense_limit", s.dense_limit}};
}

json to_json(const RunConfig& c) {
  json out{{"command", std::string(to_string(c.command))},
           {"solver", to_json(c.solver)},
           {"k", c.k},
           {"output_path", c.output_path},
           {"shift_override", c.shift_override ? json(*c.shift_override) : json(nullptr)},
           {"scan_points", c.scan_points},
           {"verify_samples", c.verify_samples},
           {"export_vectors", c.export_vectors},
           {"matrix_sparse", c.matrix_sparse}};
  if (c.model) out["model"] = to_json(*c.model);
  if (c.matrix_file) out["matrix_file"] = *c.matrix_file;
  return out;
}

}  // namespace levelshift
