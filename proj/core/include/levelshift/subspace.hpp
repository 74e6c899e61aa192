#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "levelshift/types.hpp"

namespace levelshift {

inline constexpr double kDropTolerance = 1e-10;

struct OrthonormalizeResult {
  std::vector<StateVector> basis;
  /// Input positions whose remainder fell below the drop tolerance.
  std::vector<std::size_t> dropped;
};

/// Modified Gram-Schmidt with a second full pass ("twice is enough").
/// A vector is dropped when its remainder after both passes is below
/// drop_tol times its original norm. Processing follows input order.
OrthonormalizeResult orthonormalize(const std::vector<StateVector>& vectors,
                                    double drop_tol = kDropTolerance);

/// Orthogonal projector Σ_v |v><v| onto the span of an orthonormal basis.
/// Immutable; copies share the basis storage.
class Projector {
 public:
  /// Rank-zero projector on a space of dimension `dim`.
  explicit Projector(Index dim);
  /// Validates that `basis` is orthonormal (Gram identity within `tol`).
  explicit Projector(const std::vector<StateVector>& basis, double tol = 1e-10);
  /// Columns of `columns` are the basis vectors.
  explicit Projector(DenseMatrix columns, double tol = 1e-10);

  Index dim() const noexcept { return dim_; }
  Index rank() const noexcept { return columns_->cols(); }
  const DenseMatrix& columns() const noexcept { return *columns_; }
  std::vector<StateVector> basis() const;

  StateVector apply(const StateVector& psi) const;
  /// out += scale * P psi
  void apply_add(const StateVector& psi, double scale, StateVector& out) const;
  DenseMatrix to_dense() const;

 private:
  Index dim_;
  std::shared_ptr<const DenseMatrix> columns_;
};

/// project(P, ψ) = Σ_v <v|ψ> v
StateVector project(const Projector& p, const StateVector& psi);

/// An eigenvalue with an orthonormal basis of its eigenvectors.
struct Eigenspace {
  double eigenvalue = 0.0;
  std::vector<StateVector> basis;
  std::vector<double> residual_norms;

  std::size_t multiplicity() const noexcept { return basis.size(); }
  Index dim() const noexcept { return basis.empty() ? 0 : basis.front().size(); }
  DenseMatrix columns() const;
  Projector projector() const;
};

/// Columns of `v` packed side by side.
DenseMatrix as_columns(const std::vector<StateVector>& v);

/// Largest entry of |Q^H Q - I|.
double gram_deviation(const DenseMatrix& q);

/// Deterministic basis for span(q) (q orthonormal): coordinate axes are
/// projected into the subspace and Gram-Schmidt'ed, taking at each step the
/// axis with the largest remaining projection (lowest index on ties). Each
/// returned vector has a real positive component at its pivot axis.
std::vector<StateVector> canonical_basis(const DenseMatrix& q);

/// Largest principal angle (radians) between span(a) and span(b); both
/// orthonormal. Subspaces of different dimension are π/2 apart.
double max_principal_angle(const DenseMatrix& a, const DenseMatrix& b);

/// Largest angle between a vector of span(a) and the subspace span(b);
/// zero iff span(a) ⊆ span(b).
double containment_angle(const DenseMatrix& a, const DenseMatrix& b);

/// Orthonormal basis of the orthogonal complement of span(q) (q orthonormal).
DenseMatrix complement_basis(const DenseMatrix& q);

}  // namespace levelshift
