#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "levelshift/ground_engines.hpp"
#include "levelshift/models.hpp"

namespace levelshift {

/// Site occupations ρ_i of an N-particle state.
struct DensityVector {
  std::vector<double> occupations;
  int particle_number = 0;

  /// 0 <= ρ_i <= cap and |Σρ - N| <= tol; throws invalid_argument.
  void validate(double cap, double tol = 1e-10) const;
};

struct PenaltySchedule {
  double mu_start = 1.0;
  double mu_factor = 10.0;
  double mu_final = 1e6;
};

struct SearchOptions {
  double density_tol = 1e-6;
  PenaltySchedule schedule;
  /// Inner multi-start count (one feasible deterministic start plus seeded
  /// random ones).
  int inner_starts = 4;
  int max_newton_steps = 200;
  std::uint64_t seed = 7;
  /// Outer Nelder-Mead starts and iteration cap.
  int outer_starts = 5;
  int outer_max_iterations = 400;
};

struct FunctionalEvaluation {
  DensityVector density;
  /// <ψ|T + W + K P0|ψ> at the best feasible ψ found.
  double F_value = 0.0;
  /// F_value + Σ v_i ρ_i
  double E_value = 0.0;
  double constraint_violation = 0.0;
  int inner_iterations = 0;
  double penalty_final = 0.0;
  /// Penalized objective at the end of each μ stage (best start).
  std::vector<double> stage_values;
  StateVector state;
};

/// Constrained search F[ρ] = min <ψ|T + W + K P0|ψ> over unit ψ with
/// <ψ|n_i|ψ> = ρ_i, where P0 projects onto `ground` (ground eigenspace of the
/// model's full H0, external potential included).
///
/// Quadratic-penalty continuation (μ = 1, 10, ..., 1e6) with a
/// Levenberg-damped Riemannian Newton minimization inside each stage. The
/// final state's probabilities are then projected onto the density
/// constraints (phases kept), so the reported F is attained by an exactly
/// feasible state. Throws `infeasible` if the violation stays above
/// density_tol.
FunctionalEvaluation evaluate_F(const ModelSpec& model, const Eigenspace& ground,
                                double shift, const DensityVector& rho,
                                const SearchOptions& options = {});

/// evaluate_F plus Σ_i v_i ρ_i.
FunctionalEvaluation evaluate_E(const ModelSpec& model, const Eigenspace& ground,
                                double shift, const DensityVector& rho,
                                const SearchOptions& options = {});

struct OuterStartTrace {
  std::vector<double> start;
  std::vector<double> best_density;
  double best_value = 0.0;
  int iterations = 0;
  int infeasible_evaluations = 0;
};

struct DensityMinimum {
  DensityVector density;
  double energy = 0.0;
  FunctionalEvaluation evaluation;
  double shift = 0.0;
  double ground_energy = 0.0;
  GroundResult ground;
  std::vector<OuterStartTrace> traces;
};

/// min_ρ E[ρ] over the capped simplex {0 <= ρ_i <= cap, Σρ_i = N}: Nelder-Mead
/// on the first M-1 occupations with projection onto the constraint set,
/// multi-started from seeded interior points.
DensityMinimum minimize_over_densities(const ModelSpec& model,
                                       const SolverConfig& cfg,
                                       const SearchOptions& options = {},
                                       std::optional<double> shift_override = {});

/// Euclidean projection of x onto {0 <= ρ_i <= cap, Σρ_i = total}.
std::vector<double> project_capped_simplex(const std::vector<double>& x,
                                           double cap, double total);

}  // namespace levelshift
