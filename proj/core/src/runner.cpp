#include "levelshift/runner.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "levelshift/constrained_search.hpp"
#include "levelshift/deflation.hpp"
#include "levelshift/error.hpp"
#include "levelshift/matrix_market.hpp"
#include "levelshift/report.hpp"
#include "levelshift/verify.hpp"

#ifndef LEVELSHIFT_VERSION
#define LEVELSHIFT_VERSION "unknown"
#endif

namespace levelshift {

using nlohmann::json;

std::string_view library_version() noexcept { return LEVELSHIFT_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io_error, "SHA-256 computation failed");
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

namespace {

constexpr std::size_t kMaxScanPoints = 20000;

class PhaseTimer {
 public:
  explicit PhaseTimer(json& timing) : timing_(timing) {}

  template <class F>
  auto time(const std::string& phase, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      json& timing;
      std::string phase;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        timing[phase] = dt.count();
      }
    } record{timing_, phase, start};
    return f();
  }

 private:
  json& timing_;
};

// Every interior grid point of the capped simplex on a scan_points lattice.
std::vector<std::vector<double>> density_grid(int sites, double cap, double total, int points) {
  std::vector<std::vector<double>> grid;
  std::vector<int> index(static_cast<std::size_t>(std::max(0, sites - 1)), 0);
  const double step = cap / (points - 1);
  while (true) {
    std::vector<double> rho;
    double sum = 0.0;
    for (int i : index) {
      rho.push_back(i * step);
      sum += i * step;
    }
    const double last = total - sum;
    if (last >= -1e-12 && last <= cap + 1e-12) {
      rho.push_back(std::clamp(last, 0.0, cap));
      grid.push_back(std::move(rho));
      if (grid.size() > kMaxScanPoints) {
        throw Error(ErrorCode::config_error,
                    "scan_points: grid exceeds " + std::to_string(kMaxScanPoints) + " densities");
      }
    }
    std::size_t pos = 0;
    while (pos < index.size() && ++index[pos] == points) index[pos++] = 0;
    if (pos == index.size()) break;
  }
  return grid;
}

struct Outcome {
  json results;
  bool ok = false;
};

Outcome run_solve(const HermitianOperator& h, const RunConfig& c, PhaseTimer& timer) {
  const GroundResult r = timer.time("solve", [&] { return solve_ground(h, c.solver); });
  return {{{"ground", to_json(r, c.export_vectors)}}, r.converged};
}

Outcome run_excited(const HermitianOperator& h, const RunConfig& c, PhaseTimer& timer) {
  FirstExcitedOptions opts;
  opts.shift = c.shift_override;
  opts.escalate = !c.shift_override.has_value();
  const FirstExcitedResult r = timer.time("excited", [&] { return first_excited(h, c.solver, opts); });
  const bool ok = r.ground.converged && r.level.validation.ground.converged &&
                  r.level.validation.verdict == ShiftVerdict::valid && r.eigenvectors_verified;
  return {to_json(r, c.export_vectors), ok};
}

Outcome run_ladder(const HermitianOperator& h, const RunConfig& c, PhaseTimer& timer) {
  const LadderResult r = timer.time("ladder", [&] { return ladder(h, c.k, c.solver); });
  const bool ok = std::all_of(r.validity_checks.begin(), r.validity_checks.end(),
                              [](const ValidityCheck& v) { return v.passed; });
  return {to_json(r, c.export_vectors), ok};
}

Outcome run_verify(const HermitianOperator& h, const RunConfig& c, PhaseTimer& timer) {
  VerifyOptions opts;
  opts.shift = c.shift_override;
  opts.samples = c.verify_samples;
  const VerificationSummary s = timer.time("verify", [&] { return verify_theorems(h, c.solver, opts); });
  return {to_json(s), s.all_passed()};
}

Outcome run_dft_scan(const HermitianOperator& h, const RunConfig& c, PhaseTimer& timer) {
  const ModelSpec& model = *c.model;
  if (!model.has_site_structure() || model.kind == ModelKind::heisenberg) {
    throw Error(ErrorCode::unsupported,
                "dft-scan needs a fermionic lattice model (tight_binding or hubbard)");
  }
  const GroundResult ground = timer.time("ground", [&] { return solve_ground(h, c.solver); });
  if (!ground.converged) {
    throw Error(ErrorCode::not_converged, "ground solve of the model did not converge");
  }
  const double shift =
      c.shift_override ? *c.shift_override : select_shift(h, ground.eigenspace).shift;
  const ShiftValidation validation = timer.time("validate_shift", [&] {
    return validate_shift(build_deflated(h, ground.eigenspace, shift), ground.eigenspace.eigenvalue,
                          shift, c.solver);
  });

  SearchOptions options;
  json table = json::array();
  timer.time("scan", [&] {
    for (const auto& rho : density_grid(model.sites, model.site_capacity(),
                                        static_cast<double>(model.particles()), c.scan_points)) {
      const DensityVector d{rho, model.particles()};
      try {
        const FunctionalEvaluation e = evaluate_E(model, ground.eigenspace, shift, d, options);
        table.push_back({{"rho", rho}, {"F", e.F_value}, {"E", e.E_value},
                         {"violation", e.constraint_violation}, {"feasible", true}});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::infeasible) throw;
        table.push_back({{"rho", rho}, {"F", nullptr}, {"E", nullptr}, {"violation", nullptr},
                         {"feasible", false}, {"error", e.what()}});
      }
    }
    return 0;
  });

  const DensityMinimum minimum = timer.time(
      "minimize", [&] { return minimize_over_densities(model, c.solver, options, shift); });
  const auto levels = timer.time("oracle", [&] {
    return exact_diagonalize(h, c.solver.degeneracy_gap_tol, c.solver.dense_limit);
  });
  json oracle{{"E0", levels.front().eigenvalue}};
  bool agrees = false;
  if (levels.size() > 1) {
    const double error = std::abs(minimum.energy - levels[1].eigenvalue);
    agrees = error <= 1e-4;
    oracle["E1"] = levels[1].eigenvalue;
    oracle["abs_error"] = error;
    oracle["within_tolerance"] = agrees;
    oracle["tolerance"] = 1e-4;
  }
  json results{{"K", shift},
               {"ground", to_json(ground, c.export_vectors)},
               {"validation", {{"verdict", std::string(to_string(validation.verdict))},
                               {"measured_min", validation.measured_min},
                               {"overlap", validation.overlap}}},
               {"table", std::move(table)},
               {"minimum", to_json(minimum)},
               {"oracle", std::move(oracle)}};
  const bool ok = validation.verdict == ShiftVerdict::valid && validation.ground.converged && agrees;
  return {std::move(results), ok};
}

}  // namespace

RunReport run(const RunConfig& config) {
  RunReport report;
  json& doc = report.document;
  const json echo = to_json(config);
  doc["config"] = echo;
  doc["version"] = std::string(library_version());
  doc["input_digest"] = {{"algorithm", "sha256"}, {"config", sha256_hex(echo.dump())}};
  doc["timing"] = json::object();
  PhaseTimer timer(doc["timing"]);
  try {
    config.validate();
    const HermitianOperator h = timer.time("load", [&] {
      if (config.model) return build(*config.model);
      MatrixLoadOptions opts;
      opts.sparse = config.matrix_sparse;
      opts.dense_limit = config.solver.dense_limit;
      LoadedMatrix m = load_matrix(*config.matrix_file, opts);
      doc["input_digest"]["matrix"] = m.digest;
      doc["input"] = {{"stored_entries", m.stored_entries}};
      return m.op;
    });
    doc["input"]["dimension"] = h.dim();
    doc["input"]["spectral_scale"] = h.spectral_scale();

    std::function<Outcome(const HermitianOperator&, const RunConfig&, PhaseTimer&)> handler;
    switch (config.command) {
      case Command::solve: handler = run_solve; break;
      case Command::excited: handler = run_excited; break;
      case Command::ladder: handler = run_ladder; break;
      case Command::dft_scan: handler = run_dft_scan; break;
      case Command::verify: handler = run_verify; break;
    }
    Outcome outcome = handler(h, config, timer);
    doc["results"] = std::move(outcome.results);
    doc["status"] = outcome.ok ? "ok" : "checks_failed";
    report.exit_code = outcome.ok ? 0 : 1;
  } catch (const Error& e) {
    doc["status"] = "error";
    doc["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    report.exit_code = 2;
  } catch (const std::exception& e) {
    doc["status"] = "error";
    doc["error"] = {{"code", "internal"}, {"message", e.what()}};
    report.exit_code = 2;
  }
  return report;
}

RunReport run_and_write(const RunConfig& config) {
  RunReport report = run(config);
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write report to " + config.output_path);
  out << report.document.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + config.output_path);
  return report;
}

}  // namespace levelshift
