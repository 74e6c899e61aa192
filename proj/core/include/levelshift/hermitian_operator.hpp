#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "levelshift/subspace.hpp"
#include "levelshift/types.hpp"

namespace levelshift {

enum class StorageKind { dense, sparse, matrix_free };

/// One rank-d level shift K * Σ_β |v_β><v_β|.
struct ShiftTerm {
  double shift;
  Projector projector;
};

/// A self-adjoint operator: a base (dense matrix, sparse matrix, or a
/// matrix-free action) plus an ordered list of projector shifts. Shifted
/// operators share the base with their predecessor, so a deflation ladder
/// never copies or densifies the original operator.
///
/// Hermiticity is validated once at construction.
class HermitianOperator {
 public:
  using Action = std::function<void(const StateVector& in, StateVector& out)>;

  static HermitianOperator from_dense(DenseMatrix matrix,
                                      double hermiticity_tol = 1e-12);
  static HermitianOperator from_sparse(SparseMatrix matrix,
                                       double hermiticity_tol = 1e-12);
  /// The action is probed on 10 seeded vector pairs for self-adjointness
  /// (relative tolerance 1e-10). The spectral scale is estimated by power
  /// iteration and flagged heuristic.
  static HermitianOperator from_action(Index dim, Action action,
                                       std::uint64_t probe_seed = 0x51ab1e);

  Index dim() const noexcept;
  StorageKind storage() const noexcept;
  /// True when the base has explicit entries (dense or sparse).
  bool has_entries() const noexcept;

  StateVector apply(const StateVector& psi) const;
  void apply(const StateVector& psi, StateVector& out) const;

  /// this + shift * projector. The shift may be any real; callers that need
  /// K > 0 enforce it themselves.
  HermitianOperator with_shift(double shift, Projector projector) const;
  /// The operator with all shift terms removed.
  HermitianOperator base() const;
  std::span<const ShiftTerm> shifts() const noexcept { return shifts_; }

  /// Full matrix including shift terms.
  DenseMatrix to_dense() const;
  /// Base entries as a sparse matrix (throws for matrix-free storage).
  SparseMatrix base_sparse() const;

  /// Bound on |λ|: Gershgorin row-sum bound of the base plus Σ|K_j|.
  /// Never below 1e-300 so relative tolerances stay meaningful for H = 0.
  double spectral_scale() const noexcept;
  /// Upper bound on the base spectrum (Gershgorin for stored entries,
  /// 1.1 x power-iteration estimate of |λ|max for matrix-free bases).
  double base_upper_bound() const noexcept;
  /// Upper bound on the full spectrum: base bound plus Σ max(K_j, 0).
  double upper_bound() const noexcept;
  /// True when the bounds come from a power-iteration estimate.
  bool bounds_are_heuristic() const noexcept;

 private:
  struct Base;
  HermitianOperator(std::shared_ptr<const Base> base,
                    std::vector<ShiftTerm> shifts);

  std::shared_ptr<const Base> base_;
  std::vector<ShiftTerm> shifts_;
};

/// H psi
StateVector apply(const HermitianOperator& h, const StateVector& psi);

/// <ψ|Hψ> for a normalized ψ. Throws hermiticity_violation when the
/// imaginary part exceeds 1e-10 |Re| + 1e-12.
double expectation(const HermitianOperator& h, const StateVector& psi);

/// <a|b>, conjugate-linear in a.
Complex overlap(const StateVector& a, const StateVector& b);

/// Normalized copy; throws on the zero vector.
StateVector normalize(const StateVector& psi);

/// ||H v - λ v||
double residual_norm(const HermitianOperator& h, const StateVector& v,
                     double eigenvalue);

/// Maximum of |<x|Ay> - conj(<y|Ax>)| / (||x|| ||Ay|| + ||y|| ||Ax||) over
/// `probes` seeded random pairs.
double self_adjointness_defect(const HermitianOperator& h, int probes = 10,
                               std::uint64_t seed = 0x51ab1e);

}  // namespace levelshift
