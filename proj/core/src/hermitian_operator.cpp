#include "levelshift/hermitian_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>
#include <variant>

#include "dimension_check.hpp"
#include "levelshift/error.hpp"
#include "levelshift/rng.hpp"

namespace levelshift {

struct HermitianOperator::Base {
  Index dim = 0;
  std::variant<DenseMatrix, SparseMatrix, Action> storage;
  /// Bound on |λ| of the base.
  double radius = 0.0;
  /// Upper bound on λ of the base.
  double upper = 0.0;
  bool heuristic = false;

  void apply(const StateVector& in, StateVector& out) const {
    if (const auto* d = std::get_if<DenseMatrix>(&storage)) {
      out.noalias() = *d * in;
    } else if (const auto* s = std::get_if<SparseMatrix>(&storage)) {
      out.noalias() = *s * in;
    } else {
      out.resize(dim);
      std::get<Action>(storage)(in, out);
    }
  }
};

namespace {

constexpr double kScaleFloor = 1e-300;

void check_square(Index rows, Index cols) {
  if (rows != cols) {
    throw Error(ErrorCode::dimension_mismatch,
                "operator matrix must be square, got " + std::to_string(rows) +
                    "x" + std::to_string(cols));
  }
  if (rows < 1) throw Error(ErrorCode::invalid_argument, "operator dim must be >= 1");
}

void check_hermitian_deviation(double deviation, double largest, double tol) {
  if (deviation > tol * largest) {
    throw Error(ErrorCode::hermiticity_violation,
                "max|A_ij - conj(A_ji)| = " + std::to_string(deviation) +
                    " exceeds " + std::to_string(tol) + " x max|A_ij| = " +
                    std::to_string(tol * largest));
  }
}

// Power iteration for the dominant |λ|; used only where no entries exist.
double power_estimate(const HermitianOperator::Action& action, Index dim,
                      std::uint64_t seed) {
  StateVector v = random_state(dim, seed);
  StateVector w(dim);
  double estimate = 0.0;
  for (int it = 0; it < 500; ++it) {
    action(v, w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    if (it > 10 && std::abs(norm - estimate) <= 1e-6 * norm) {
      estimate = norm;
      break;
    }
    estimate = norm;
    v = w / norm;
  }
  return estimate;
}

}  // namespace

HermitianOperator::HermitianOperator(std::shared_ptr<const Base> base,
                                     std::vector<ShiftTerm> shifts)
    : base_(std::move(base)), shifts_(std::move(shifts)) {}

HermitianOperator HermitianOperator::from_dense(DenseMatrix matrix,
                                                double hermiticity_tol) {
  check_square(matrix.rows(), matrix.cols());
  const double largest = matrix.cwiseAbs().maxCoeff();
  const double deviation = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  check_hermitian_deviation(deviation, largest, hermiticity_tol);
  // Symmetrize so that the stored matrix is exactly Hermitian.
  matrix = (0.5 * (matrix + matrix.adjoint())).eval();

  auto base = std::make_shared<Base>();
  base->dim = matrix.rows();
  double radius = 0.0;
  double upper = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < matrix.rows(); ++i) {
    const double row = matrix.row(i).cwiseAbs().sum();
    const double diag = matrix(i, i).real();
    radius = std::max(radius, row);
    upper = std::max(upper, diag + row - std::abs(matrix(i, i)));
  }
  base->radius = radius;
  base->upper = upper;
  base->storage = std::move(matrix);
  return HermitianOperator(std::move(base), {});
}

HermitianOperator HermitianOperator::from_sparse(SparseMatrix matrix,
                                                 double hermiticity_tol) {
  check_square(matrix.rows(), matrix.cols());
  matrix.makeCompressed();
  const SparseMatrix adj = matrix.adjoint();
  const SparseMatrix diff = matrix - adj;
  double largest = 0.0;
  for (Index k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      largest = std::max(largest, std::abs(it.value()));
    }
  }
  double deviation = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      deviation = std::max(deviation, std::abs(it.value()));
    }
  }
  check_hermitian_deviation(deviation, largest, hermiticity_tol);
  SparseMatrix sym = (0.5 * (matrix + adj)).pruned();
  sym.makeCompressed();

  auto base = std::make_shared<Base>();
  base->dim = sym.rows();
  double radius = 0.0;
  double upper = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < sym.outerSize(); ++i) {
    double row = 0.0;
    double diag = 0.0;
    double diag_abs = 0.0;
    for (SparseMatrix::InnerIterator it(sym, i); it; ++it) {
      row += std::abs(it.value());
      if (it.col() == i) {
        diag = it.value().real();
        diag_abs = std::abs(it.value());
      }
    }
    radius = std::max(radius, row);
    upper = std::max(upper, diag + row - diag_abs);
  }
  base->radius = radius;
  base->upper = upper;
  base->storage = std::move(sym);
  return HermitianOperator(std::move(base), {});
}

HermitianOperator HermitianOperator::from_action(Index dim, Action action,
                                                 std::uint64_t probe_seed) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "operator dim must be >= 1");
  if (!action) throw Error(ErrorCode::invalid_argument, "empty operator action");
  auto base = std::make_shared<Base>();
  base->dim = dim;
  base->storage = action;
  const double estimate = power_estimate(action, dim, probe_seed ^ 0xa5a5a5a5ULL);
  base->radius = 1.1 * estimate;
  base->upper = 1.1 * estimate;
  base->heuristic = true;
  HermitianOperator op(std::move(base), {});
  const double defect = self_adjointness_defect(op, 10, probe_seed);
  if (defect > 1e-10) {
    throw Error(ErrorCode::hermiticity_violation,
                "matrix-free action fails self-adjointness probes (relative defect " +
                    std::to_string(defect) + ")");
  }
  return op;
}

Index HermitianOperator::dim() const noexcept { return base_->dim; }

StorageKind HermitianOperator::storage() const noexcept {
  if (std::holds_alternative<DenseMatrix>(base_->storage)) return StorageKind::dense;
  if (std::holds_alternative<SparseMatrix>(base_->storage)) return StorageKind::sparse;
  return StorageKind::matrix_free;
}

bool HermitianOperator::has_entries() const noexcept {
  return storage() != StorageKind::matrix_free;
}

void HermitianOperator::apply(const StateVector& psi, StateVector& out) const {
  detail::require_same_dim(dim(), psi.size(), "apply");
  base_->apply(psi, out);
  for (const auto& term : shifts_) term.projector.apply_add(psi, term.shift, out);
}

StateVector HermitianOperator::apply(const StateVector& psi) const {
  StateVector out(dim());
  apply(psi, out);
  return out;
}

HermitianOperator HermitianOperator::with_shift(double shift,
                                                Projector projector) const {
  detail::require_same_dim(dim(), projector.dim(), "with_shift");
  if (!std::isfinite(shift)) {
    throw Error(ErrorCode::invalid_argument, "shift must be finite");
  }
  auto shifts = shifts_;
  shifts.push_back(ShiftTerm{shift, std::move(projector)});
  return HermitianOperator(base_, std::move(shifts));
}

HermitianOperator HermitianOperator::base() const {
  return HermitianOperator(base_, {});
}

DenseMatrix HermitianOperator::to_dense() const {
  DenseMatrix m;
  if (const auto* d = std::get_if<DenseMatrix>(&base_->storage)) {
    m = *d;
  } else if (const auto* s = std::get_if<SparseMatrix>(&base_->storage)) {
    m = DenseMatrix(*s);
  } else {
    m.resize(dim(), dim());
    StateVector e = StateVector::Zero(dim());
    StateVector col(dim());
    for (Index j = 0; j < dim(); ++j) {
      e.setZero();
      e(j) = 1.0;
      base_->apply(e, col);
      m.col(j) = col;
    }
  }
  for (const auto& term : shifts_) m += term.shift * term.projector.to_dense();
  return m;
}

SparseMatrix HermitianOperator::base_sparse() const {
  if (const auto* s = std::get_if<SparseMatrix>(&base_->storage)) return *s;
  if (const auto* d = std::get_if<DenseMatrix>(&base_->storage)) {
    return d->sparseView();
  }
  throw Error(ErrorCode::unsupported, "matrix-free operator has no stored entries");
}

double HermitianOperator::spectral_scale() const noexcept {
  double scale = base_->radius;
  for (const auto& term : shifts_) scale += std::abs(term.shift);
  return std::max(scale, kScaleFloor);
}

double HermitianOperator::base_upper_bound() const noexcept { return base_->upper; }

double HermitianOperator::upper_bound() const noexcept {
  double upper = base_->upper;
  for (const auto& term : shifts_) upper += std::max(term.shift, 0.0);
  return upper;
}

bool HermitianOperator::bounds_are_heuristic() const noexcept {
  return base_->heuristic;
}

StateVector apply(const HermitianOperator& h, const StateVector& psi) {
  return h.apply(psi);
}

double expectation(const HermitianOperator& h, const StateVector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorCode::invalid_argument,
                "expectation requires a normalized state (norm " +
                    std::to_string(norm) + ")");
  }
  const Complex value = psi.dot(h.apply(psi));
  if (std::abs(value.imag()) > 1e-10 * std::abs(value.real()) + 1e-12) {
    throw Error(ErrorCode::hermiticity_violation,
                "expectation has imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

Complex overlap(const StateVector& a, const StateVector& b) {
  detail::require_same_dim(a.size(), b.size(), "overlap");
  return a.dot(b);
}

StateVector normalize(const StateVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw Error(ErrorCode::invalid_argument, "cannot normalize zero vector");
  return psi / norm;
}

double residual_norm(const HermitianOperator& h, const StateVector& v,
                     double eigenvalue) {
  return (h.apply(v) - eigenvalue * v).norm();
}

double self_adjointness_defect(const HermitianOperator& h, int probes,
                               std::uint64_t seed) {
  SplitMix64 seeds(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const StateVector x = random_state(h.dim(), seeds.next());
    const StateVector y = random_state(h.dim(), seeds.next());
    const StateVector ax = h.apply(x);
    const StateVector ay = h.apply(y);
    const Complex lhs = x.dot(ay);
    const Complex rhs = std::conj(y.dot(ax));
    const double denom = x.norm() * ay.norm() + y.norm() * ax.norm();
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

}  // namespace levelshift
