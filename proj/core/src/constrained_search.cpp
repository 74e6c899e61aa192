#include "levelshift/constrained_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "levelshift/deflation.hpp"
#include "levelshift/error.hpp"
#include "levelshift/rng.hpp"
#include "nelder_mead.hpp"

namespace levelshift {

void DensityVector::validate(double cap, double tol) const {
  if (particle_number < 1) {
    throw Error(ErrorCode::invalid_argument, "density: particle_number must be >= 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    const double r = occupations[i];
    if (!(r >= -tol && r <= cap + tol)) {
      throw Error(ErrorCode::invalid_argument,
                  "density: occupation " + std::to_string(i) + " = " +
                      std::to_string(r) + " outside [0, " + std::to_string(cap) + "]");
    }
    sum += r;
  }
  if (std::abs(sum - particle_number) > tol) {
    throw Error(ErrorCode::invalid_argument,
                "density: occupations sum to " + std::to_string(sum) + ", expected " +
                    std::to_string(particle_number));
  }
}

std::vector<double> project_capped_simplex(const std::vector<double>& x, double cap,
                                           double total) {
  const double n = static_cast<double>(x.size());
  if (x.empty() || total < 0.0 || total > n * cap) {
    throw Error(ErrorCode::invalid_argument, "capped simplex is empty");
  }
  auto mass = [&](double tau) {
    double s = 0.0;
    for (double v : x) s += std::clamp(v - tau, 0.0, cap);
    return s;
  };
  double lo = *std::min_element(x.begin(), x.end()) - cap;
  double hi = *std::max_element(x.begin(), x.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > total) lo = mid; else hi = mid;
  }
  const double tau = 0.5 * (lo + hi);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i] - tau, 0.0, cap);
  return out;
}

namespace {

// Real representation x = [Re ψ; Im ψ] of a sector of dimension S.
struct InnerProblem {
  Eigen::MatrixXd a;    // 2S x 2S representation of T + W + K P0
  Eigen::MatrixXd occ;  // S x M occupations
  Eigen::VectorXd rho;  // M targets
  Index states = 0;
  double scale = 1.0;
};

Eigen::MatrixXd real_representation(const DenseMatrix& m) {
  const Index s = m.rows();
  Eigen::MatrixXd r(2 * s, 2 * s);
  r.topLeftCorner(s, s) = m.real();
  r.topRightCorner(s, s) = -m.imag();
  r.bottomLeftCorner(s, s) = m.imag();
  r.bottomRightCorner(s, s) = m.real();
  return 0.5 * (r + r.transpose());
}

Eigen::VectorXd probabilities(const InnerProblem& p, const Eigen::VectorXd& x) {
  return x.head(p.states).cwiseAbs2() + x.tail(p.states).cwiseAbs2();
}

Eigen::VectorXd densities(const InnerProblem& p, const Eigen::VectorXd& x) {
  return p.occ.transpose() * probabilities(p, x);
}

double objective(const InnerProblem& p, const Eigen::VectorXd& x, double mu) {
  const Eigen::VectorXd d = densities(p, x) - p.rho;
  return x.dot(p.a * x) + mu * d.squaredNorm();
}

// N_i x for the diagonal number operator of site i.
Eigen::VectorXd number_times(const InnerProblem& p, Index site, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  out.head(p.states) = p.occ.col(site).cwiseProduct(x.head(p.states));
  out.tail(p.states) = p.occ.col(site).cwiseProduct(x.tail(p.states));
  return out;
}

struct StageOutcome {
  Eigen::VectorXd x;
  double value = 0.0;
  int steps = 0;
};

// Levenberg-damped Newton on the unit sphere, phase direction factored out.
StageOutcome minimize_stage(const InnerProblem& p, Eigen::VectorXd x, double mu,
                            int max_steps) {
  const Index n = x.size();
  const Index sites = p.occ.cols();
  double damping = 1e-6 * (p.scale + mu);
  StageOutcome out;
  double f = objective(p, x, mu);
  for (int step = 0; step < max_steps; ++step) {
    const Eigen::VectorXd ax = p.a * x;
    const double qa = x.dot(ax);
    const Eigen::VectorXd dens = densities(p, x);
    Eigen::VectorXd grad = 2.0 * (ax - qa * x);
    Eigen::MatrixXd hess = 2.0 * (p.a - qa * Eigen::MatrixXd::Identity(n, n));
    for (Index i = 0; i < sites; ++i) {
      const Eigen::VectorXd nx = number_times(p, i, x);
      const Eigen::VectorXd gi = 2.0 * (nx - dens(i) * x);
      const double d = dens(i) - p.rho(i);
      grad += 2.0 * mu * d * gi;
      hess += 2.0 * mu * (gi * gi.transpose());
      Eigen::VectorXd diag(n);
      diag.head(p.states) = p.occ.col(i);
      diag.tail(p.states) = p.occ.col(i);
      Eigen::MatrixXd ni = diag.asDiagonal();
      hess += 4.0 * mu * d * (ni - dens(i) * Eigen::MatrixXd::Identity(n, n));
    }
    // Tangent space: orthogonal to x and to the phase direction i x.
    Eigen::VectorXd phase(n);
    phase.head(p.states) = -x.tail(p.states);
    phase.tail(p.states) = x.head(p.states);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - x * x.transpose() -
                           phase * phase.transpose();
    grad = proj * grad;
    const bool stationary = grad.norm() <= 1e-13 * (p.scale + mu);
    Eigen::MatrixXd tangent_hess = proj * hess * proj;
    const double lift = 1.0 + tangent_hess.cwiseAbs().maxCoeff();
    tangent_hess += lift * (x * x.transpose() + phase * phase.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (tangent_hess + tangent_hess.transpose()));
    const double lowest = es.eigenvalues()(0);
    const bool saddle = lowest < -1e-10 * (p.scale + mu);
    if (stationary && !saddle) break;
    const Eigen::VectorXd coeff = es.eigenvectors().transpose() * grad;

    auto try_accept = [&](const Eigen::VectorXd& s) {
      const Eigen::VectorXd trial = (x + s).normalized();
      const double ft = objective(p, trial, mu);
      if (!(ft < f)) return false;
      const double gain = f - ft;
      x = trial;
      f = ft;
      ++out.steps;
      if (gain <= 1e-16 * (std::abs(f) + p.scale) && !saddle) step = max_steps;
      return true;
    };

    bool accepted = false;
    if (!stationary) {
      for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
        const double shift = saddle ? damping - lowest : damping;
        const Eigen::VectorXd s = proj * -(es.eigenvectors() *
                                           coeff.cwiseQuotient((es.eigenvalues().array() + shift).matrix()));
        accepted = try_accept(s);
        if (accepted) {
          damping = std::max(damping * 0.25, 1e-14 * (p.scale + mu));
        } else {
          damping *= 8.0;
        }
      }
    }
    // Zero gradient at a saddle (e.g. amplitudes pinned at exactly zero):
    // step along the most negative curvature direction.
    if (!accepted && saddle) {
      const Eigen::VectorXd v = proj * es.eigenvectors().col(0);
      for (double t = 1.0; t > 1e-8 && !accepted; t *= 0.5) {
        accepted = try_accept(t * v) || try_accept(-t * v);
      }
    }
    if (!accepted) break;
  }
  out.x = x;
  out.value = f;
  return out;
}

// Weighted projection of |ψ_s|^2 onto the density constraints; zero
// probabilities stay zero, phases are kept.
Eigen::VectorXd restore_feasibility(const InnerProblem& p, const Eigen::VectorXd& x) {
  const Index s = p.states;
  const Index m = p.occ.cols();
  Eigen::VectorXd prob = probabilities(p, x);
  Eigen::MatrixXd c(m + 1, s);
  c.topRows(m) = p.occ.transpose();
  c.row(m).setOnes();
  Eigen::VectorXd b(m + 1);
  b.head(m) = p.rho;
  b(m) = 1.0;
  for (int it = 0; it < 20; ++it) {
    const Eigen::VectorXd r = c * prob - b;
    if (r.cwiseAbs().maxCoeff() <= 1e-15) break;
    const Eigen::MatrixXd weighted = c * prob.asDiagonal() * c.transpose();
    const Eigen::VectorXd lambda = weighted.completeOrthogonalDecomposition().solve(r);
    Eigen::VectorXd next = prob - prob.cwiseProduct(c.transpose() * lambda);
    next = next.cwiseMax(0.0);
    if ((next - prob).cwiseAbs().maxCoeff() <= 1e-18) break;
    prob = next;
  }
  Eigen::VectorXd out(2 * s);
  for (Index k = 0; k < s; ++k) {
    const double amp = std::sqrt(prob(k));
    const double re = x(k);
    const double im = x(s + k);
    const double mag = std::hypot(re, im);
    out(k) = mag > 0.0 ? amp * re / mag : amp;
    out(s + k) = mag > 0.0 ? amp * im / mag : 0.0;
  }
  return out.normalized();
}

struct InnerResult {
  Eigen::VectorXd x;
  double f_value = 0.0;
  double violation = 0.0;
  std::vector<double> stage_values;
  int steps = 0;
};

InnerResult run_start(const InnerProblem& p, Eigen::VectorXd x,
                      const SearchOptions& options) {
  InnerResult r;
  const auto& sched = options.schedule;
  for (double mu = sched.mu_start; mu <= sched.mu_final * (1.0 + 1e-12);
       mu *= sched.mu_factor) {
    StageOutcome stage = minimize_stage(p, x, mu, options.max_newton_steps);
    x = stage.x;
    r.steps += stage.steps;
    r.stage_values.push_back(stage.value);
  }
  r.x = restore_feasibility(p, x);
  r.f_value = r.x.dot(p.a * r.x);
  r.violation = (densities(p, r.x) - p.rho).cwiseAbs().maxCoeff();
  return r;
}

Eigen::VectorXd from_complex(const StateVector& psi) {
  Eigen::VectorXd x(2 * psi.size());
  x.head(psi.size()) = psi.real();
  x.tail(psi.size()) = psi.imag();
  return x.normalized();
}

StateVector to_complex(const Eigen::VectorXd& x) {
  const Index s = x.size() / 2;
  StateVector psi(s);
  for (Index k = 0; k < s; ++k) psi(k) = Complex(x(k), x(s + k));
  return psi;
}

double potential_energy(const ModelSpec& model, const DensityVector& rho) {
  const auto v = model.potential();
  double e = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) e += v[i] * rho.occupations[i];
  return e;
}

}  // namespace

FunctionalEvaluation evaluate_F(const ModelSpec& model, const Eigenspace& ground,
                                double shift, const DensityVector& rho,
                                const SearchOptions& options) {
  if (!model.has_site_structure()) {
    throw Error(ErrorCode::unsupported, "constrained search needs a lattice model");
  }
  if (!(shift >= 0.0)) {
    throw Error(ErrorCode::shift_rejected, "constrained search needs K >= 0");
  }
  if (rho.occupations.size() != static_cast<std::size_t>(model.sites)) {
    throw Error(ErrorCode::dimension_mismatch,
                "density has " + std::to_string(rho.occupations.size()) +
                    " sites, model has " + std::to_string(model.sites));
  }
  const bool spin_model = model.kind == ModelKind::heisenberg;
  if (!spin_model && rho.particle_number != model.particles()) {
    throw Error(ErrorCode::invalid_argument,
                "density particle number " + std::to_string(rho.particle_number) +
                    " != model particle number " + std::to_string(model.particles()));
  }
  rho.validate(model.site_capacity());

  // T + W: the model without its external potential.
  ModelSpec bare = model;
  bare.external_potential.clear();
  DenseMatrix a = build(bare).to_dense();
  if (ground.basis.empty() || ground.basis.front().size() != a.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "ground eigenspace does not live in the model's basis");
  }
  const DenseMatrix q = ground.columns();
  a += shift * (q * q.adjoint());

  InnerProblem p;
  p.states = a.rows();
  p.a = real_representation(a);
  p.occ = site_occupations(model);
  p.rho = Eigen::Map<const Eigen::VectorXd>(rho.occupations.data(),
                                            static_cast<Index>(rho.occupations.size()));
  p.scale = std::max(1.0, a.cwiseAbs().rowwise().sum().maxCoeff());

  // Starts: the feasible real state √p of the uniform distribution, the same
  // magnitudes with seeded phases, then seeded random states.
  std::vector<Eigen::VectorXd> starts;
  {
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(
        2 * p.states, 1.0 / std::sqrt(static_cast<double>(p.states)));
    uniform.tail(p.states).setZero();
    const Eigen::VectorXd feasible = restore_feasibility(p, uniform);
    starts.push_back(feasible);
    SplitMix64 rng(options.seed);
    if (options.inner_starts > 1) {
      StateVector phased = to_complex(feasible);
      for (Index k = 0; k < phased.size(); ++k) {
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        phased(k) *= std::polar(1.0, angle);
      }
      starts.push_back(from_complex(phased));
    }
    for (int s = 2; s < options.inner_starts; ++s) {
      starts.push_back(from_complex(random_state(p.states, rng.next())));
    }
  }

  std::optional<InnerResult> best;
  int total_steps = 0;
  for (const auto& start : starts) {
    InnerResult r = run_start(p, start, options);
    total_steps += r.steps;
    const bool feasible = r.violation <= options.density_tol;
    const bool best_feasible = best && best->violation <= options.density_tol;
    if (!best || (feasible && !best_feasible) ||
        (feasible == best_feasible && r.f_value < best->f_value)) {
      best = std::move(r);
    }
  }
  if (best->violation > options.density_tol) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "density constraint violation " << best->violation << " above tolerance "
        << options.density_tol << " after the final penalty stage";
    throw Error(ErrorCode::infeasible, msg.str());
  }

  FunctionalEvaluation out;
  out.density = rho;
  out.F_value = best->f_value;
  out.E_value = out.F_value;
  out.constraint_violation = best->violation;
  out.inner_iterations = total_steps;
  out.penalty_final = options.schedule.mu_final;
  out.stage_values = best->stage_values;
  out.state = to_complex(best->x);
  return out;
}

FunctionalEvaluation evaluate_E(const ModelSpec& model, const Eigenspace& ground,
                                double shift, const DensityVector& rho,
                                const SearchOptions& options) {
  FunctionalEvaluation out = evaluate_F(model, ground, shift, rho, options);
  out.E_value = out.F_value + potential_energy(model, rho);
  return out;
}

DensityMinimum minimize_over_densities(const ModelSpec& model, const SolverConfig& cfg,
                                       const SearchOptions& options,
                                       std::optional<double> shift_override) {
  if (!model.has_site_structure()) {
    throw Error(ErrorCode::unsupported, "density minimization needs a lattice model");
  }
  const HermitianOperator h0 = build(model);
  DensityMinimum out;
  out.ground = solve_ground(h0, cfg);
  if (!out.ground.converged) {
    throw Error(ErrorCode::not_converged, "ground solve of the model did not converge");
  }
  out.ground_energy = out.ground.eigenspace.eigenvalue;
  out.shift = shift_override ? *shift_override
                             : select_shift(h0, out.ground.eigenspace).shift;

  const int sites = model.sites;
  const double cap = model.site_capacity();
  const int n = model.kind == ModelKind::heisenberg ? 0 : model.particles();
  if (n == 0) {
    throw Error(ErrorCode::unsupported,
                "density minimization needs a fixed particle number (fermionic model)");
  }
  const double total = static_cast<double>(n);

  auto to_density = [&](const std::vector<double>& y) {
    std::vector<double> full(y);
    full.push_back(total - std::accumulate(y.begin(), y.end(), 0.0));
    return project_capped_simplex(full, cap, total);
  };

  SplitMix64 rng(options.seed ^ 0x0ddba11ULL);
  std::optional<std::vector<double>> best_density;
  double best_value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.outer_starts; ++s) {
    std::vector<double> raw(static_cast<std::size_t>(sites));
    for (auto& r : raw) r = total / sites + 0.3 * cap * rng.symmetric();
    std::vector<double> start = project_capped_simplex(raw, cap, total);
    for (auto& r : start) r = 0.9 * r + 0.1 * total / sites;
    start.pop_back();

    OuterStartTrace trace;
    trace.start = start;
    auto objective = [&](const std::vector<double>& y) {
      const DensityVector rho{to_density(y), n};
      try {
        return evaluate_E(model, out.ground.eigenspace, out.shift, rho, options).E_value;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::infeasible) throw;
        ++trace.infeasible_evaluations;
        return std::numeric_limits<double>::infinity();
      }
    };
    detail::NelderMeadOptions nm;
    nm.initial_step = 0.1 * cap;
    nm.max_iterations = options.outer_max_iterations;
    const auto result = detail::nelder_mead(objective, start, nm);
    trace.best_density = to_density(result.x);
    trace.best_value = result.value;
    trace.iterations = result.iterations;
    if (result.value < best_value) {
      best_value = result.value;
      best_density = trace.best_density;
    }
    out.traces.push_back(std::move(trace));
  }
  if (!best_density) {
    std::ostringstream msg;
    msg << "every outer start failed:";
    for (const auto& t : out.traces) {
      msg << " [" << t.iterations << " iterations, " << t.infeasible_evaluations
          << " infeasible]";
    }
    throw Error(ErrorCode::infeasible, msg.str());
  }
  out.density = DensityVector{*best_density, n};
  out.evaluation = evaluate_E(model, out.ground.eigenspace, out.shift, out.density, options);
  out.energy = out.evaluation.E_value;
  return out;
}

}  // namespace levelshift
