// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "levelshift/constrained_search.hpp"
#include "levelshift/deflation.hpp"
#include "levelshift/ground_engines.hpp"
#include "levelshift/models.hpp"
#include "levelshift/rng.hpp"
#include "levelshift/run_config.hpp"
#include "levelshift/runner.hpp"

using namespace levelshift;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 20 seeded random Hermitian operators, dimensions 8..256.
struct Case {
  Index dim;
  std::uint64_t seed;
};

std::vector<Case> battery() {
  const std::vector<Index> dims = {8,   16,  24,  32,  48,  64,  80,  96,  112, 128,
                                   144, 160, 176, 192, 208, 224, 240, 248, 252, 256};
  std::vector<Case> out;
  for (std::size_t i = 0; i < dims.size(); ++i) out.push_back({dims[i], 1000 + i});
  return out;
}

std::vector<double> sorted_eigenvalues(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h.to_dense(), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

// Deflated operator built from the iterative ground solve, as a user would.
struct Deflated {
  HermitianOperator h0;
  HermitianOperator h1;
  std::vector<Eigenspace> levels0;
  double shift;
};

Deflated deflate_case(const Case& c) {
  const HermitianOperator h0 = random_hermitian(c.dim, c.seed);
  const SolverConfig cfg;
  const GroundResult g = solve_ground(h0, cfg);
  const double shift = select_shift(h0, g.eigenspace).shift;
  return {h0, build_deflated(h0, g.eigenspace, shift), exact_diagonalize(h0), shift};
}

Outcome ac1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool ok = true;
  for (const auto& c : battery()) {
    const Deflated d = deflate_case(c);
    std::vector<double> expected;
    for (std::size_t j = 0; j < d.levels0.size(); ++j) {
      const double e = d.levels0[j].eigenvalue + (j == 0 ? d.shift : 0.0);
      expected.insert(expected.end(), d.levels0[j].multiplicity(), e);
    }
    std::sort(expected.begin(), expected.end());
    const auto got = sorted_eigenvalues(d.h1);
    const double scale = d.h1.spectral_scale();
    for (std::size_t i = 0; i < got.size(); ++i) {
      const double rel = std::abs(got[i] - expected[i]) / scale;
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-8;
    }
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 60.0;
  std::ostringstream s;
  s << "max |dE|/scale = " << worst << ", " << elapsed << " s";
  return {ok, s.str()};
}

Outcome ac2() {
  double worst = 0.0;
  for (const auto& c : battery()) {
    const Deflated d = deflate_case(c);
    const auto levels1 = exact_diagonalize(d.h1);
    for (std::size_t j = 0; j < d.levels0.size(); ++j) {
      const double target = d.levels0[j].eigenvalue + (j == 0 ? d.shift : 0.0);
      const auto match = std::min_element(levels1.begin(), levels1.end(),
                                          [&](const Eigenspace& a, const Eigenspace& b) {
                                            return std::abs(a.eigenvalue - target) <
                                                   std::abs(b.eigenvalue - target);
                                          });
      worst = std::max(worst, max_principal_angle(d.levels0[j].columns(), match->columns()));
    }
  }
  std::ostringstream s;
  s << "max principal angle = " << worst;
  return {worst <= 1e-6, s.str()};
}

Outcome ac3() {
  double worst = std::numeric_limits<double>::infinity();
  SplitMix64 seeds(3);
  for (const auto& c : battery()) {
    const HermitianOperator h0 = random_hermitian(c.dim, c.seed);
    const auto levels = exact_diagonalize(h0);
    const double e0 = levels[0].eigenvalue;
    const double e1 = levels[1].eigenvalue;
    const double valid = select_shift(h0, levels[0]).shift;
    for (double k : {valid, 0.5 * (e1 - e0)}) {
      const HermitianOperator h1 = build_deflated(h0, levels[0], k);
      const double floor = std::min(e1, e0 + k);
      const double tol = 1e-10 * h1.spectral_scale();
      for (int i = 0; i < 1000; ++i) {
        const StateVector psi = random_state(c.dim, seeds.next());
        worst = std::min(worst, (expectation(h1, psi) - floor) / tol);
      }
    }
  }
  std::ostringstream s;
  s << "min slack / tolerance = " << worst << " over 40000 samples";
  return {worst >= -1.0, s.str()};
}

Outcome ac4() {
  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const HermitianOperator h = HermitianOperator::from_dense(d);
  SolverConfig cfg;
  Eigenspace ground;
  ground.eigenvalue = 0.0;
  ground.basis = {StateVector::Unit(3, 0)};
  const auto small = validate_shift(build_deflated(h, ground, 0.5), 0.0, 0.5, cfg);
  const auto& v = small.ground.eigenspace;
  const double e1_overlap = v.multiplicity() == 1 ? std::norm(v.basis[0](0)) : 0.0;
  const auto big = validate_shift(build_deflated(h, ground, 5.0), 0.0, 5.0, cfg);
  const bool ok = small.verdict == ShiftVerdict::too_small &&
                  std::abs(small.measured_min - 0.5) <= 1e-10 && e1_overlap > 0.99 &&
                  big.verdict == ShiftVerdict::valid;
  std::ostringstream s;
  s << "K=0.5: " << to_string(small.verdict) << " min " << small.measured_min
    << " |<e1|v>|^2 " << e1_overlap << "; K=5: " << to_string(big.verdict);
  return {ok, s.str()};
}

ModelSpec model(ModelKind kind, int sites, std::map<std::string, double> params) {
  ModelSpec m;
  m.kind = kind;
  m.sites = sites;
  m.params = std::move(params);
  return m;
}

Outcome ac5() {
  const SolverConfig cfg;
  std::ostringstream s;
  bool ok = true;
  auto check = [&](const std::string& name, const HermitianOperator& h, double e0,
                   std::size_t m0, double e1, std::size_t m1) {
    const FirstExcitedResult r = first_excited(h, cfg);
    const bool good = std::abs(r.ground.eigenspace.eigenvalue - e0) <= 1e-8 &&
                      r.ground.eigenspace.multiplicity() == m0 &&
                      r.level.projector.rank() == static_cast<Index>(m0) &&
                      std::abs(r.excited.eigenvalue - e1) <= 1e-8 &&
                      r.excited.multiplicity() == m1 &&
                      r.level.validation.verdict == ShiftVerdict::valid;
    ok = ok && good;
    s << name << " E0=" << r.ground.eigenspace.eigenvalue << "(x"
      << r.ground.eigenspace.multiplicity() << ") E1=" << r.excited.eigenvalue << "(x"
      << r.excited.multiplicity() << "); ";
  };
  check("heisenberg J=1", build(model(ModelKind::heisenberg, 2, {{"J", 1.0}})), -0.75, 1, 0.25, 3);
  check("heisenberg J=-1", build(model(ModelKind::heisenberg, 2, {{"J", -1.0}})), -0.25, 3, 0.75, 1);
  check("hubbard t=1 U=2", build(model(ModelKind::hubbard, 2, {{"t", 1.0}, {"U", 2.0}})),
        1.0 - std::sqrt(5.0), 1, 0.0, 3);
  return {ok, s.str()};
}

Outcome ac6() {
  const HermitianOperator h = build(model(ModelKind::tight_binding, 5, {{"t", 1.0}}));
  const LadderResult r = ladder(h, 4, SolverConfig{});
  bool ok = r.spectra.size() == 5 && r.levels.size() == 4;
  double worst = 0.0;
  for (std::size_t k = 0; ok && k < 5; ++k) {
    const double expected = -2.0 * std::cos((k + 1) * std::numbers::pi / 6.0);
    worst = std::max(worst, std::abs(r.spectra[k].eigenvalue - expected));
  }
  for (const auto& v : r.validity_checks) ok = ok && v.passed;
  ok = ok && worst <= 1e-8 && r.target_residual <= 1e-8;
  std::ostringstream s;
  s << "max |E_k - (-2cos(k pi/6))| = " << worst << ", rungs valid: "
    << std::count_if(r.validity_checks.begin(), r.validity_checks.end(),
                     [](const ValidityCheck& v) { return v.passed; })
    << "/4";
  return {ok, s.str()};
}

std::vector<std::pair<std::string, HermitianOperator>> test_models() {
  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  ModelSpec v = model(ModelKind::hubbard, 2, {{"t", 1.0}, {"U", 2.0}});
  v.external_potential = {0.5, -0.5};
  return {{"diag(0,1,2)", HermitianOperator::from_dense(d)},
          {"heisenberg J=1", build(model(ModelKind::heisenberg, 2, {{"J", 1.0}}))},
          {"heisenberg J=-1", build(model(ModelKind::heisenberg, 2, {{"J", -1.0}}))},
          {"heisenberg 6 sites", build(model(ModelKind::heisenberg, 6, {{"J", 1.0}}))},
          {"hubbard dimer", build(model(ModelKind::hubbard, 2, {{"t", 1.0}, {"U", 2.0}}))},
          {"hubbard dimer v", build(v)},
          {"hubbard 4 sites", build(model(ModelKind::hubbard, 4, {{"t", 1.0}, {"U", 4.0}}))},
          {"tight binding 5", build(model(ModelKind::tight_binding, 5, {{"t", 1.0}}))},
          {"tight binding dimer", build(model(ModelKind::tight_binding, 2, {{"t", 1.0}}))},
          {"random 64", random_hermitian(64, 7)}};
}

Outcome ac7() {
  const SolverConfig cfg;
  double worst = 0.0;
  std::ostringstream s;
  bool ok = true;
  for (const auto& [name, h] : test_models()) {
    const FirstExcitedResult r = first_excited(h, cfg);
    const GroundResult alt = complement_minimize(h, r.ground.eigenspace.projector(), cfg);
    const double diff = std::abs(r.excited.eigenvalue - alt.eigenspace.eigenvalue);
    worst = std::max(worst, diff);
    if (diff > 1e-8 || r.excited.multiplicity() != alt.eigenspace.multiplicity()) {
      ok = false;
      s << name << " differs; ";
    }
  }
  s << "max |E1 - E1(complement)| = " << worst << " over " << test_models().size() << " models";
  return {ok && worst <= 1e-8, s.str()};
}

Outcome ac8() {
  const SolverConfig cfg;
  double worst_e = 0.0, worst_angle = 0.0;
  for (const auto& [name, h] : test_models()) {
    const GroundResult g = solve_ground(h, cfg);
    const double k = select_shift(h, g.eigenspace).shift;
    FirstExcitedOptions a, b;
    a.shift = k;
    b.shift = 3.0 * k;
    const auto ra = deflate_once(h, g, cfg, a);
    const auto rb = deflate_once(h, g, cfg, b);
    worst_e = std::max(worst_e, std::abs(ra.excited.eigenvalue - rb.excited.eigenvalue));
    worst_angle = std::max(worst_angle,
                           max_principal_angle(ra.excited.columns(), rb.excited.columns()));
  }
  std::ostringstream s;
  s << "K vs 3K: max |dE1| = " << worst_e << ", max angle = " << worst_angle;
  return {worst_e <= 1e-8 && worst_angle <= 1e-6, s.str()};
}

Outcome ac9() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream s;
  for (const auto& m : {model(ModelKind::hubbard, 2, {{"t", 1.0}, {"U", 2.0}}),
                        model(ModelKind::tight_binding, 2, {{"t", 1.0}})}) {
    const auto levels = exact_diagonalize(build(m));
    const DensityMinimum r = minimize_over_densities(m, SolverConfig{});
    const double err = std::abs(r.energy - levels[1].eigenvalue);
    ok = ok && err <= 1e-4 && r.evaluation.constraint_violation <= 1e-6;
    s << to_string(m.kind) << ": |E - E1| = " << err << " (violation "
      << r.evaluation.constraint_violation << "); ";
  }
  const double elapsed = seconds_since(t0);
  s << elapsed << " s";
  return {ok && elapsed < 120.0, s.str()};
}

Outcome ac10() {
  const std::vector<std::string> configs = {
      R"({"command":"solve","model":{"kind":"random","sites":40,"params":{"seed":11}}})",
      R"({"command":"excited","model":{"kind":"hubbard","sites":2,"params":{"t":1,"U":2}}})",
      R"({"command":"ladder","k":4,"model":{"kind":"tight_binding","sites":5,"params":{"t":1}}})",
      R"({"command":"verify","verify_samples":200,"model":{"kind":"heisenberg","sites":4,"params":{"J":1}},"solver":{"engine":"rq_descent","seed":99}})",
      R"({"command":"dft-scan","scan_points":5,"model":{"kind":"tight_binding","sites":2,"params":{"t":1}}})",
      R"({"command":"excited","model":{"kind":"random","sites":30,"params":{"seed":5}},"solver":{"engine":"shifted_power"}})"};
  bool ok = true;
  int compared = 0;
  for (const auto& text : configs) {
    const RunReport first = run(parse_config(text));
    const RunReport replay = run(config_from_json(first.document.at("config")));
    const bool same = first.document.at("results") == replay.document.at("results") &&
                      first.document.at("config") == replay.document.at("config") &&
                      first.exit_code == replay.exit_code && first.exit_code == 0;
    ok = ok && same;
    ++compared;
  }
  std::ostringstream s;
  s << compared << " reports replayed from their config echo, results identical: "
    << (ok ? "yes" : "no");
  return {ok, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 spectrum map on 20 random operators", ac1},
      {"AC2 eigenspace equality", ac2},
      {"AC3 variational lower bound", ac3},
      {"AC4 shift validity check on diag(0,1,2)", ac4},
      {"AC5 first excited level of analytic models", ac5},
      {"AC6 tight-binding ladder", ac6},
      {"AC7 agreement with complement minimization", ac7},
      {"AC8 shift invariance", ac8},
      {"AC9 density-constrained search", ac9},
      {"AC10 replay determinism", ac10},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
