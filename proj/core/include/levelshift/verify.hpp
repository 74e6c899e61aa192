#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelshift/ground_engines.hpp"
#include "levelshift/hermitian_operator.hpp"

namespace levelshift {

struct TheoremCheck {
  std::string name;
  bool passed = false;
  /// Worst measured slack or deviation, compared against `tolerance`.
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// Valid shift to test; defaults to select_shift on the oracle ground.
  std::optional<double> shift;
  int samples = 1000;
  std::uint64_t seed = 2024;
};

struct VerificationSummary {
  double ground_energy = 0.0;
  std::size_t ground_multiplicity = 0;
  /// Second distinct eigenvalue; NaN when the spectrum is a single level.
  double first_excited_energy = 0.0;
  double shift = 0.0;
  /// 0.5 * gap, used for the too-small-shift runs.
  double small_shift = 0.0;
  double spectral_scale = 0.0;
  std::vector<TheoremCheck> checks;

  bool all_passed() const;
};

/// Checks of the level-shift construction against exact diagonalization:
///   lower_bound_valid_K / lower_bound_small_K
///       <ψ|H1|ψ> >= min{E1, E0 + K} on random unit vectors
///   eigenvector_preservation   H0 eigenvectors stay eigenvectors of H1
///   spectrum_map               spec(H1) = spec(H0) with E0 -> E0 + K
///   eigenspace_equality        eigenspaces of H1 = those of H0
///   small_shift_counterexample K < gap: ground of H1 is E0 + K on the old
///                              ground space
///   first_excited_vs_oracle    first_excited agrees with the oracle
VerificationSummary verify_theorems(const HermitianOperator& h,
                                    const SolverConfig& cfg,
                                    const VerifyOptions& options = {});

}  // namespace levelshift
