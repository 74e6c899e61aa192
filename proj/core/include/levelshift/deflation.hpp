#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levelshift/ground_engines.hpp"
#include "levelshift/hermitian_operator.hpp"
#include "levelshift/subspace.hpp"

namespace levelshift {

/// H + K * Σ_β |g_β><g_β| over the basis of `ground`.
///
/// Requires K > 0, an orthonormal basis, and ||H g - E g|| within
/// residual_tol * spectral_scale(H) for every basis vector.
HermitianOperator build_deflated(const HermitianOperator& h,
                                 const Eigenspace& ground, double shift,
                                 double residual_tol = 1e-8);

struct ShiftChoice {
  double shift = 0.0;
  /// Upper bound on the not-yet-deflated spectrum that the shift clears.
  double upper_bound = 0.0;
  /// Set when the bound is a power-iteration estimate, not Gershgorin.
  bool heuristic = false;
};

/// K = (λ_upper - E0) + max(1, 0.1 (λ_upper - E0)).
///
/// λ_upper bounds the base operator (shift terms excluded): deflated
/// directions are eigenvectors of the base, so every eigenvalue that has
/// not been shifted away is still under the base bound. Since E1 <= λ_upper
/// the returned K always exceeds the gap E1 - E0.
ShiftChoice select_shift(const HermitianOperator& h, const Eigenspace& ground);

enum class ShiftVerdict { valid, too_small, indeterminate };
std::string_view to_string(ShiftVerdict verdict) noexcept;

struct ShiftValidation {
  ShiftVerdict verdict = ShiftVerdict::indeterminate;
  /// min <ψ|H1|ψ>, i.e. the ground eigenvalue of H1.
  double measured_min = 0.0;
  /// tr(P_ground(H1) P_deflated) / mult: the fraction of H1's ground
  /// eigenspace that lies in the deflated range.
  double overlap = 0.0;
  GroundResult ground;
  std::string diagnostic;
};

/// Solves the ground state of H1 and compares it with E0 + K. A ground
/// value away from E0 + K means the shift cleared the gap. A ground value at
/// E0 + K carried by the old ground space means the shift was too small.
/// Anything else (a crossing E1 = E0 + K, or a solver failure) is
/// indeterminate.
ShiftValidation validate_shift(const HermitianOperator& h1, double ground_energy,
                               double shift, const SolverConfig& cfg);

/// One rung: H_{j+1} = H_j + K_j P_j.
struct DeflationLevel {
  double shift = 0.0;
  double ground_energy = 0.0;
  Projector projector{Index{1}};
  HermitianOperator op = HermitianOperator::from_dense(DenseMatrix::Zero(1, 1));
  ShiftValidation validation;
  bool heuristic_shift = false;
  /// Shifts tried before the accepted one (doublings and perturbations).
  std::vector<double> rejected_shifts;
};

struct FirstExcitedOptions {
  /// Use this K instead of select_shift.
  std::optional<double> shift;
  /// Double K on too_small, multiply by 1.37 on indeterminate, at most 8
  /// times. With escalation off, a non-valid verdict is returned as is.
  bool escalate = true;
};

struct FirstExcitedResult {
  GroundResult ground;
  DeflationLevel level;
  /// Ground eigenspace of H1; residuals are measured against the input H.
  Eigenspace excited;
  double residual_vs_input = 0.0;
  /// Residual check against the input operator passed.
  bool eigenvectors_verified = false;
};

inline constexpr int kMaxShiftEscalations = 8;

FirstExcitedResult first_excited(const HermitianOperator& h,
                                 const SolverConfig& cfg,
                                 const FirstExcitedOptions& options = {});

/// Deflate a known ground eigenspace of `h` once and solve the next level.
FirstExcitedResult deflate_once(const HermitianOperator& h,
                                const GroundResult& ground,
                                const SolverConfig& cfg,
                                const FirstExcitedOptions& options = {});

struct LevelSpectrum {
  double eigenvalue = 0.0;
  std::size_t multiplicity = 0;
  int iterations = 0;
};

struct ValidityCheck {
  bool passed = false;
  ShiftVerdict verdict = ShiftVerdict::indeterminate;
  double measured_min = 0.0;
};

struct LadderResult {
  std::vector<DeflationLevel> levels;
  /// Ground eigenvalue of H_0 ... H_k (i.e. E_0 ... E_k of the input).
  std::vector<LevelSpectrum> spectra;
  Eigenspace target;
  double target_residual = 0.0;
  std::vector<ValidityCheck> validity_checks;
};

/// k repeated deflations. Level j's operator is H + Σ_{i<=j} K_i P_i; the
/// target is the k-th distinct excited eigenspace of `h`, re-verified
/// against `h` itself.
LadderResult ladder(const HermitianOperator& h, int k, const SolverConfig& cfg);

}  // namespace levelshift
