#include <algorithm>
#include <cmath>
#include <string>

#include "dimension_check.hpp"
#include "ground_internal.hpp"
#include "levelshift/error.hpp"
#include "levelshift/rng.hpp"

namespace levelshift {

std::string_view to_string(Engine engine) noexcept {
  switch (engine) {
    case Engine::exact: return "exact";
    case Engine::lanczos: return "lanczos";
    case Engine::rq_descent: return "rq_descent";
    case Engine::shifted_power: return "shifted_power";
  }
  return "unknown";
}

Engine engine_from_string(std::string_view name) {
  if (name == "exact") return Engine::exact;
  if (name == "lanczos") return Engine::lanczos;
  if (name == "rq_descent") return Engine::rq_descent;
  if (name == "shifted_power") return Engine::shifted_power;
  throw Error(ErrorCode::config_error,
              "engine: unknown value '" + std::string(name) +
                  "' (expected exact, lanczos, rq_descent, shifted_power)");
}

int SolverConfig::iteration_budget(Index dim) const {
  if (max_iterations) return *max_iterations;
  if (engine == Engine::shifted_power) return 50000;
  const Index scaled = 10 * dim;
  return static_cast<int>(std::min<Index>(scaled, 50000));
}

void SolverConfig::validate() const {
  if (!(residual_tol > 0.0)) {
    throw Error(ErrorCode::config_error, "residual_tol: must be > 0");
  }
  if (max_iterations && *max_iterations < 1) {
    throw Error(ErrorCode::config_error, "max_iterations: must be >= 1");
  }
  if (!(degeneracy_gap_tol > 0.0)) {
    throw Error(ErrorCode::config_error, "degeneracy_gap_tol: must be > 0");
  }
  if (dense_limit < 1) {
    throw Error(ErrorCode::config_error, "dense_limit: must be >= 1");
  }
}

namespace detail {

void remove_components(const DenseMatrix& forbidden, StateVector& v) {
  if (forbidden.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    v.noalias() -= forbidden * (forbidden.adjoint() * v);
  }
}

void restricted_apply(const HermitianOperator& op, const DenseMatrix& forbidden,
                      const StateVector& v, StateVector& out) {
  op.apply(v, out);
  if (forbidden.cols() > 0) out.noalias() -= forbidden * (forbidden.adjoint() * out);
}

std::vector<std::pair<Index, Index>> cluster_sorted(const Eigen::VectorXd& values,
                                                    double gap) {
  std::vector<std::pair<Index, Index>> clusters;
  Index begin = 0;
  for (Index i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) > gap) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return clusters;
}

namespace {

StateVector start_vector(Index dim, const DenseMatrix& forbidden,
                         std::uint64_t seed) {
  SplitMix64 seeds(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    StateVector v = random_state(dim, seeds.next());
    remove_components(forbidden, v);
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
  throw Error(ErrorCode::empty_search_space,
              "could not draw a start vector outside the forbidden subspace");
}

double restricted_residual(const HermitianOperator& op, const DenseMatrix& forbidden,
                           const StateVector& v, double eigenvalue) {
  StateVector hv(op.dim());
  restricted_apply(op, forbidden, v, hv);
  return (hv - eigenvalue * v).norm();
}

// Eigenvalue = mean Rayleigh quotient over the subspace; basis canonicalized.
Eigenspace finalize(const HermitianOperator& op, const DenseMatrix& forbidden,
                    const std::vector<StateVector>& vectors) {
  const auto ortho = orthonormalize(vectors);
  const DenseMatrix q = as_columns(ortho.basis);
  DenseMatrix hq(q.rows(), q.cols());
  for (Index j = 0; j < q.cols(); ++j) {
    StateVector col(q.rows());
    restricted_apply(op, forbidden, q.col(j), col);
    hq.col(j) = col;
  }
  const DenseMatrix small = q.adjoint() * hq;
  Eigenspace space;
  space.eigenvalue = small.diagonal().real().mean();
  space.basis = canonical_basis(q);
  for (const auto& v : space.basis) {
    space.residual_norms.push_back(
        restricted_residual(op, forbidden, v, space.eigenvalue));
  }
  return space;
}

}  // namespace

GroundResult resolve_ground(const HermitianOperator& op, const DenseMatrix& forbidden,
                            const SolverConfig& cfg, Engine engine,
                            const SingleSolver& single,
                            const std::optional<StateVector>& first_start) {
  cfg.validate();
  const Index n = op.dim();
  if (n < 2) {
    throw Error(ErrorCode::invalid_argument,
                std::string(to_string(engine)) + " requires dim >= 2");
  }
  if (forbidden.cols() >= n) {
    throw Error(ErrorCode::empty_search_space,
                "forbidden subspace has full rank " + std::to_string(n));
  }
  GroundResult result;
  result.engine = engine;
  result.seed = cfg.seed;
  result.spectral_scale = op.spectral_scale();
  result.converged = true;

  const double tolerance = cfg.residual_tol * result.spectral_scale;
  const double gap = cfg.degeneracy_gap_tol * result.spectral_scale;
  // The budget follows the engine that runs, not cfg.engine.
  SolverConfig effective = cfg;
  effective.engine = engine;
  const int budget = effective.iteration_budget(n);

  DenseMatrix found = forbidden;
  std::vector<StateVector> vectors;
  double ground_theta = 0.0;
  SplitMix64 seeds(cfg.seed);

  while (found.cols() < n) {
    StateVector start;
    if (vectors.empty() && first_start) {
      detail::require_same_dim(n, first_start->size(), "start vector");
      start = *first_start;
      remove_components(found, start);
      start = normalize(start);
    } else {
      start = start_vector(n, found, seeds.next());
    }
    const RunContext ctx{op, found, budget, tolerance, result.spectral_scale};
    SingleRun run = single(ctx, start);
    result.iterations += run.iterations;
    result.run_iterations.push_back(run.iterations);
    for (auto& note : run.notes) result.notes.push_back(std::move(note));
    if (vectors.empty()) result.rayleigh_trace = std::move(run.trace);

    if (!run.converged) {
      result.converged = false;
      result.notes.push_back("run " + std::to_string(result.run_iterations.size()) +
                             " hit the iteration budget (" + std::to_string(budget) +
                             ")");
      if (vectors.empty()) vectors.push_back(run.vector);
      break;
    }
    if (!vectors.empty() && run.theta - ground_theta > gap) break;
    if (vectors.empty()) ground_theta = run.theta;
    StateVector v = run.vector;
    remove_components(found, v);
    v = normalize(v);
    vectors.push_back(v);
    found.conservativeResize(Eigen::NoChange, found.cols() + 1);
    found.col(found.cols() - 1) = v;
  }

  result.eigenspace = finalize(op, forbidden, vectors);
  return result;
}

GroundResult exact_restricted_ground(const HermitianOperator& op,
                                     const DenseMatrix& forbidden,
                                     const SolverConfig& cfg) {
  cfg.validate();
  const Index n = op.dim();
  if (n > cfg.dense_limit) {
    throw Error(ErrorCode::dense_limit_exceeded,
                "dimension " + std::to_string(n) + " exceeds dense_limit " +
                    std::to_string(cfg.dense_limit) +
                    "; use an iterative engine (lanczos, rq_descent, shifted_power)");
  }
  if (forbidden.cols() >= n) {
    throw Error(ErrorCode::empty_search_space,
                "forbidden subspace has full rank " + std::to_string(n));
  }
  const DenseMatrix qc = complement_basis(forbidden);
  const DenseMatrix full = op.to_dense();
  DenseMatrix reduced = qc.adjoint() * full * qc;
  reduced = (0.5 * (reduced + reduced.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(reduced);

  GroundResult result;
  result.engine = Engine::exact;
  result.seed = cfg.seed;
  result.spectral_scale = op.spectral_scale();
  result.converged = es.info() == Eigen::Success;
  result.run_iterations.push_back(0);
  const auto clusters =
      cluster_sorted(es.eigenvalues(), cfg.degeneracy_gap_tol * result.spectral_scale);
  const auto [begin, end] = clusters.front();
  const DenseMatrix q = qc * es.eigenvectors().middleCols(begin, end - begin);
  Eigenspace& space = result.eigenspace;
  space.eigenvalue = es.eigenvalues().segment(begin, end - begin).mean();
  space.basis = canonical_basis(q);
  for (const auto& v : space.basis) {
    space.residual_norms.push_back(
        restricted_residual(op, forbidden, v, space.eigenvalue));
  }
  result.rayleigh_trace.push_back(space.eigenvalue);
  return result;
}

}  // namespace detail

GroundResult lanczos_ground(const HermitianOperator& h, const SolverConfig& cfg) {
  const DenseMatrix none(h.dim(), 0);
  return detail::resolve_ground(h, none, cfg, Engine::lanczos, detail::lanczos_run,
                                std::nullopt);
}

GroundResult rq_descent(const HermitianOperator& h, const SolverConfig& cfg,
                        const std::optional<StateVector>& start) {
  const DenseMatrix none(h.dim(), 0);
  return detail::resolve_ground(h, none, cfg, Engine::rq_descent,
                                detail::rq_descent_run, start);
}

GroundResult shifted_power_ground(const HermitianOperator& h,
                                  const SolverConfig& cfg) {
  const DenseMatrix none(h.dim(), 0);
  return detail::resolve_ground(h, none, cfg, Engine::shifted_power,
                                detail::shifted_power_run, std::nullopt);
}

GroundResult complement_minimize(const HermitianOperator& h,
                                 const Projector& forbidden,
                                 const SolverConfig& cfg) {
  detail::require_same_dim(h.dim(), forbidden.dim(), "complement_minimize");
  if (forbidden.rank() >= h.dim()) {
    throw Error(ErrorCode::empty_search_space,
                "forbidden projector has rank " + std::to_string(forbidden.rank()) +
                    " = dim; nothing left to minimize over");
  }
  const DenseMatrix& f = forbidden.columns();
  switch (cfg.engine) {
    case Engine::exact:
      return detail::exact_restricted_ground(h, f, cfg);
    case Engine::lanczos:
      return detail::resolve_ground(h, f, cfg, Engine::lanczos, detail::lanczos_run,
                                    std::nullopt);
    case Engine::rq_descent:
      return detail::resolve_ground(h, f, cfg, Engine::rq_descent,
                                    detail::rq_descent_run, std::nullopt);
    case Engine::shifted_power:
      return detail::resolve_ground(h, f, cfg, Engine::shifted_power,
                                    detail::shifted_power_run, std::nullopt);
  }
  throw Error(ErrorCode::invalid_argument, "unknown engine");
}

GroundResult solve_ground(const HermitianOperator& h, const SolverConfig& cfg) {
  return complement_minimize(h, Projector(h.dim()), cfg);
}

}  // namespace levelshift
