#include "levelshift/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dimension_check.hpp"
#include "levelshift/error.hpp"

namespace levelshift {

OrthonormalizeResult orthonormalize(const std::vector<StateVector>& vectors,
                                    double drop_tol) {
  if (vectors.empty()) {
    throw Error(ErrorCode::invalid_argument, "orthonormalize: empty input");
  }
  const Index dim = vectors.front().size();
  OrthonormalizeResult out;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    detail::require_same_dim(dim, vectors[i].size(), "orthonormalize");
    StateVector v = vectors[i];
    const double original = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out.basis) v -= q.dot(v) * q;
    }
    const double remaining = v.norm();
    if (original == 0.0 || remaining < drop_tol * original) {
      out.dropped.push_back(i);
      continue;
    }
    out.basis.push_back(v / remaining);
  }
  if (out.basis.empty()) {
    throw Error(ErrorCode::rank_deficient,
                "orthonormalize: all " + std::to_string(vectors.size()) +
                    " vectors dropped");
  }
  return out;
}

DenseMatrix as_columns(const std::vector<StateVector>& v) {
  if (v.empty()) return DenseMatrix(0, 0);
  DenseMatrix m(v.front().size(), static_cast<Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    detail::require_same_dim(m.rows(), v[j].size(), "as_columns");
    m.col(static_cast<Index>(j)) = v[j];
  }
  return m;
}

double gram_deviation(const DenseMatrix& q) {
  if (q.cols() == 0) return 0.0;
  const DenseMatrix g = q.adjoint() * q - DenseMatrix::Identity(q.cols(), q.cols());
  return g.cwiseAbs().maxCoeff();
}

namespace {

void check_orthonormal(const DenseMatrix& q, double tol) {
  const double dev = gram_deviation(q);
  if (dev > tol) {
    throw Error(ErrorCode::invalid_argument,
                "projector basis is not orthonormal (Gram deviation " +
                    std::to_string(dev) + ")");
  }
}

}  // namespace

Projector::Projector(Index dim)
    : dim_(dim), columns_(std::make_shared<const DenseMatrix>(dim, 0)) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "projector dim must be >= 1");
}

Projector::Projector(const std::vector<StateVector>& basis, double tol)
    : Projector(as_columns(basis), tol) {}

Projector::Projector(DenseMatrix columns, double tol) : dim_(columns.rows()) {
  if (dim_ < 1) {
    throw Error(ErrorCode::invalid_argument,
                "projector needs a dimension; use Projector(dim) for rank 0");
  }
  check_orthonormal(columns, tol);
  columns_ = std::make_shared<const DenseMatrix>(std::move(columns));
}

std::vector<StateVector> Projector::basis() const {
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(rank()));
  for (Index j = 0; j < rank(); ++j) out.emplace_back(columns_->col(j));
  return out;
}

StateVector Projector::apply(const StateVector& psi) const {
  detail::require_same_dim(dim_, psi.size(), "project");
  if (rank() == 0) return StateVector::Zero(dim_);
  return *columns_ * (columns_->adjoint() * psi);
}

void Projector::apply_add(const StateVector& psi, double scale,
                          StateVector& out) const {
  if (rank() == 0) return;
  out.noalias() += scale * (*columns_ * (columns_->adjoint() * psi));
}

DenseMatrix Projector::to_dense() const {
  if (rank() == 0) return DenseMatrix::Zero(dim_, dim_);
  return *columns_ * columns_->adjoint();
}

StateVector project(const Projector& p, const StateVector& psi) {
  return p.apply(psi);
}

DenseMatrix Eigenspace::columns() const { return as_columns(basis); }

Projector Eigenspace::projector() const {
  if (basis.empty()) {
    throw Error(ErrorCode::invalid_argument, "eigenspace has an empty basis");
  }
  return Projector(basis);
}

std::vector<StateVector> canonical_basis(const DenseMatrix& q) {
  const Index n = q.rows();
  const Index m = q.cols();
  std::vector<StateVector> chosen;
  chosen.reserve(static_cast<std::size_t>(m));
  // weight(i) = ||P_remaining e_i||^2 = Σ_k |q_ik|^2 - Σ_c |c_i|^2
  Eigen::VectorXd weight = q.rowwise().squaredNorm();
  for (Index step = 0; step < m; ++step) {
    const double best = weight.maxCoeff();
    Index pivot = 0;
    for (Index i = 0; i < n; ++i) {
      if (weight(i) >= best * (1.0 - 1e-9)) {
        pivot = i;
        break;
      }
    }
    StateVector c = q * q.row(pivot).adjoint();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& prev : chosen) c -= prev.dot(c) * prev;
      c = q * (q.adjoint() * c);
    }
    c /= c.norm();
    const Complex pivot_value = c(pivot);
    if (std::abs(pivot_value) > 0.0) c *= std::conj(pivot_value) / std::abs(pivot_value);
    weight -= c.cwiseAbs2();
    weight(pivot) = -1.0;
    chosen.push_back(std::move(c));
  }
  return chosen;
}

double containment_angle(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return std::numbers::pi / 2;
  detail::require_same_dim(a.rows(), b.rows(), "containment_angle");
  const DenseMatrix residual = a - b * (b.adjoint() * a);
  Eigen::JacobiSVD<DenseMatrix> svd(residual);
  const double s = std::min(1.0, svd.singularValues()(0));
  return std::asin(s);
}

double max_principal_angle(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) return std::numbers::pi / 2;
  return std::max(containment_angle(a, b), containment_angle(b, a));
}

DenseMatrix complement_basis(const DenseMatrix& q) {
  const Index n = q.rows();
  if (q.cols() == 0) return DenseMatrix::Identity(n, n);
  Eigen::HouseholderQR<DenseMatrix> qr(q);
  const DenseMatrix full = qr.householderQ() * DenseMatrix::Identity(n, n);
  return full.rightCols(n - q.cols());
}

}  // namespace levelshift
