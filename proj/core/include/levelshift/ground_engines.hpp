#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levelshift/hermitian_operator.hpp"
#include "levelshift/subspace.hpp"

namespace levelshift {

enum class Engine { exact, lanczos, rq_descent, shifted_power };

std::string_view to_string(Engine engine) noexcept;
Engine engine_from_string(std::string_view name);

inline constexpr Index kDefaultDenseLimit = 4096;

struct SolverConfig {
  Engine engine = Engine::lanczos;
  double residual_tol = 1e-10;
  /// Per-run matvec budget. Unset means 10*dim capped at 50000, except for
  /// shifted_power whose rate depends on the gap ratio rather than on dim;
  /// it gets the 50000 cap outright.
  std::optional<int> max_iterations;
  std::uint64_t seed = 1;
  double degeneracy_gap_tol = 1e-8;
  Index dense_limit = kDefaultDenseLimit;

  int iteration_budget(Index dim) const;
  /// Throws config_error on residual_tol <= 0, max_iterations < 1, ...
  void validate() const;
};

struct GroundResult {
  Eigenspace eigenspace;
  int iterations = 0;
  bool converged = false;
  double spectral_scale = 0.0;
  std::uint64_t seed = 0;
  Engine engine = Engine::lanczos;
  /// Matvec count of each single-vector run (first entry = first vector).
  std::vector<int> run_iterations;
  /// Rayleigh quotient after every iteration of the first run.
  std::vector<double> rayleigh_trace;
  /// Fallbacks and other events worth surfacing in reports.
  std::vector<std::string> notes;
};

/// Dense eigendecomposition grouped into eigenspaces (ascending). Adjacent
/// eigenvalues closer than degeneracy_gap_tol * spectral_scale are merged;
/// each eigenspace's basis is canonicalized.
std::vector<Eigenspace> exact_diagonalize(const HermitianOperator& h,
                                          double degeneracy_gap_tol = 1e-8,
                                          Index dense_limit = kDefaultDenseLimit);

/// Lanczos with full reorthogonalization and explicit restarts.
GroundResult lanczos_ground(const HermitianOperator& h, const SolverConfig& cfg);

/// Rayleigh-quotient minimization: Rayleigh-Ritz over span{ψ, g, p} with g
/// the RQ gradient and p the previous update (locally optimal conjugate
/// direction). θ never increases; a step-halving gradient fallback kicks in
/// if the subspace step fails to decrease it.
GroundResult rq_descent(const HermitianOperator& h, const SolverConfig& cfg,
                        const std::optional<StateVector>& start = std::nullopt);

/// Power iteration on σI - H with σ the Gershgorin upper bound.
GroundResult shifted_power_ground(const HermitianOperator& h,
                                  const SolverConfig& cfg);

/// Ground eigenspace of H restricted to the orthogonal complement of
/// `forbidden`. Every iterate is re-projected onto the complement.
GroundResult complement_minimize(const HermitianOperator& h,
                                 const Projector& forbidden,
                                 const SolverConfig& cfg);

/// Dispatch on cfg.engine.
GroundResult solve_ground(const HermitianOperator& h, const SolverConfig& cfg);

}  // namespace levelshift
