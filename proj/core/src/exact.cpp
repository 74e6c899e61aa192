#include <string>

#include "ground_internal.hpp"
#include "levelshift/error.hpp"

namespace levelshift {

std::vector<Eigenspace> exact_diagonalize(const HermitianOperator& h,
                                          double degeneracy_gap_tol,
                                          Index dense_limit) {
  if (h.dim() > dense_limit) {
    throw Error(ErrorCode::dense_limit_exceeded,
                "dimension " + std::to_string(h.dim()) + " exceeds dense_limit " +
                    std::to_string(dense_limit) +
                    "; use an iterative engine (lanczos, rq_descent, shifted_power)");
  }
  const DenseMatrix m = h.to_dense();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::not_converged, "dense eigensolver failed");
  }
  const double gap = degeneracy_gap_tol * h.spectral_scale();
  std::vector<Eigenspace> spaces;
  for (const auto& [begin, end] : detail::cluster_sorted(es.eigenvalues(), gap)) {
    Eigenspace space;
    space.eigenvalue = es.eigenvalues().segment(begin, end - begin).mean();
    space.basis = canonical_basis(es.eigenvectors().middleCols(begin, end - begin));
    for (const auto& v : space.basis) {
      space.residual_norms.push_back((m * v - space.eigenvalue * v).norm());
    }
    spaces.push_back(std::move(space));
  }
  return spaces;
}

}  // namespace levelshift
