#include "levelshift/report.hpp"

#include "levelshift/error.hpp"

namespace levelshift {

using nlohmann::json;

json vector_to_json(const StateVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

StateVector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, "vector must be an array of [re, im]");
  StateVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorCode::parse_error, "vector entry " + std::to_string(i) + " is not [re, im]");
    }
    v(static_cast<Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

namespace {

json eigenspace_json(const Eigenspace& e, bool include_vectors) {
  json out{{"eigenvalue", e.eigenvalue},
           {"multiplicity", e.multiplicity()},
           {"residuals", e.residual_norms}};
  if (include_vectors) {
    json vectors = json::array();
    for (const auto& v : e.basis) vectors.push_back(vector_to_json(v));
    out["vectors"] = std::move(vectors);
  }
  return out;
}

json density_json(const DensityVector& d) {
  return {{"occupations", d.occupations}, {"particle_number", d.particle_number}};
}

}  // namespace

json to_json(const GroundResult& r, bool include_vectors) {
  json out = eigenspace_json(r.eigenspace, include_vectors);
  out["iterations"] = r.iterations;
  out["run_iterations"] = r.run_iterations;
  out["converged"] = r.converged;
  out["seed"] = r.seed;
  out["engine"] = std::string(to_string(r.engine));
  out["spectral_scale"] = r.spectral_scale;
  if (!r.notes.empty()) out["notes"] = r.notes;
  return out;
}

json level_to_json(const DeflationLevel& level) {
  const auto& v = level.validation;
  json out{{"K", level.shift},
           {"E", level.ground_energy},
           {"multiplicity", level.projector.rank()},
           {"verdict", std::string(to_string(v.verdict))},
           {"measured_min", v.measured_min},
           {"overlap", v.overlap},
           {"heuristic_shift", level.heuristic_shift},
           {"rejected_shifts", level.rejected_shifts}};
  if (!v.diagnostic.empty()) out["diagnostic"] = v.diagnostic;
  return out;
}

json to_json(const FirstExcitedResult& r, bool include_vectors) {
  json target = eigenspace_json(r.excited, include_vectors);
  target["residual_vs_H0"] = r.residual_vs_input;
  target["verified"] = r.eigenvectors_verified;
  return {{"ground", to_json(r.ground, include_vectors)},
          {"levels", json::array({level_to_json(r.level)})},
          {"deflated_solve", to_json(r.level.validation.ground, false)},
          {"target", std::move(target)}};
}

json to_json(const LadderResult& r, bool include_vectors) {
  json levels = json::array();
  for (const auto& l : r.levels) levels.push_back(level_to_json(l));
  json spectra = json::array();
  for (const auto& s : r.spectra) {
    spectra.push_back({{"eigenvalue", s.eigenvalue},
                       {"multiplicity", s.multiplicity},
                       {"iterations", s.iterations}});
  }
  json target = eigenspace_json(r.target, include_vectors);
  target["residual_vs_H0"] = r.target_residual;
  return {{"levels", std::move(levels)},
          {"spectra", std::move(spectra)},
          {"target", std::move(target)}};
}

json to_json(const VerificationSummary& s) {
  json checks = json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", c.measured},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return {{"ground_energy", s.ground_energy},
          {"ground_multiplicity", s.ground_multiplicity},
          {"first_excited_energy", s.first_excited_energy},
          {"K", s.shift},
          {"small_K", s.small_shift},
          {"spectral_scale", s.spectral_scale},
          {"all_passed", s.all_passed()},
          {"checks", std::move(checks)}};
}

json to_json(const FunctionalEvaluation& e) {
  return {{"density", density_json(e.density)},
          {"F", e.F_value},
          {"E", e.E_value},
          {"violation", e.constraint_violation},
          {"inner_iterations", e.inner_iterations},
          {"penalty_final", e.penalty_final},
          {"stage_values", e.stage_values}};
}

json to_json(const DensityMinimum& m) {
  json traces = json::array();
  for (const auto& t : m.traces) {
    traces.push_back({{"start", t.start},
                      {"best_density", t.best_density},
                      {"best_value", t.best_value},
                      {"iterations", t.iterations},
                      {"infeasible_evaluations", t.infeasible_evaluations}});
  }
  return {{"density", density_json(m.density)},
          {"energy", m.energy},
          {"K", m.shift},
          {"ground_energy", m.ground_energy},
          {"ground", to_json(m.ground, false)},
          {"evaluation", to_json(m.evaluation)},
          {"starts", std::move(traces)}};
}

}  // namespace levelshift
