#include <algorithm>
#include <cmath>
#include <string>

#include "ground_internal.hpp"

namespace levelshift::detail {

namespace {

constexpr Index kMaxKrylov = 120;

struct Ritz {
  double theta;
  Eigen::VectorXd coefficients;
};

Ritz lowest_ritz(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, Index m) {
  if (m == 1) return {alpha(0), Eigen::VectorXd::Ones(1)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(alpha.head(m), beta.head(m - 1), Eigen::ComputeEigenvectors);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

}  // namespace

SingleRun lanczos_run(const RunContext& ctx, const StateVector& start) {
  const Index n = ctx.op.dim();
  const Index available = n - ctx.forbidden.cols();
  const Index max_basis = std::min(available, kMaxKrylov);

  SingleRun run;
  StateVector x = start;
  DenseMatrix v(n, max_basis);
  Eigen::VectorXd alpha(max_basis);
  Eigen::VectorXd beta(max_basis);
  StateVector w(n);

  while (true) {
    v.col(0) = x;
    Index m = 0;
    bool restart = false;
    for (Index j = 0; j < max_basis; ++j) {
      restricted_apply(ctx.op, ctx.forbidden, v.col(j), w);
      ++run.iterations;
      alpha(j) = v.col(j).dot(w).real();
      w -= alpha(j) * v.col(j);
      if (j > 0) w -= beta(j - 1) * v.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) {
        w.noalias() -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
        remove_components(ctx.forbidden, w);
      }
      beta(j) = w.norm();
      m = j + 1;

      const bool exhausted = m == max_basis || beta(j) <= 1e-14 * ctx.scale;
      const bool out_of_budget = run.iterations >= ctx.budget;
      const Index stride = std::max<Index>(1, m / 8);
      if (!(exhausted || out_of_budget || m % stride == 0)) {
        v.col(j + 1) = w / beta(j);
        continue;
      }

      const Ritz ritz = lowest_ritz(alpha, beta, m);
      if (run.trace.empty() || ritz.theta <= run.trace.back()) {
        run.trace.push_back(ritz.theta);
      }
      const double estimate = beta(j) * std::abs(ritz.coefficients(m - 1));
      if (estimate <= 0.5 * ctx.tolerance || exhausted || out_of_budget) {
        StateVector y = v.leftCols(m) * ritz.coefficients.cast<Complex>();
        remove_components(ctx.forbidden, y);
        y.normalize();
        StateVector hy(n);
        restricted_apply(ctx.op, ctx.forbidden, y, hy);
        const double theta = y.dot(hy).real();
        const double residual = (hy - theta * y).norm();
        run.theta = theta;
        run.vector = y;
        if (residual <= ctx.tolerance) {
          run.converged = true;
          return run;
        }
        if (out_of_budget) return run;
        if (exhausted) {
          x = y;
          restart = true;
          run.notes.push_back("lanczos restart after " + std::to_string(m) +
                              " Krylov vectors");
          break;
        }
      }
      v.col(j + 1) = w / beta(j);
    }
    if (!restart) return run;
  }
}

}  // namespace levelshift::detail
