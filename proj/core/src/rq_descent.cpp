#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ground_internal.hpp"

namespace levelshift::detail {

namespace {

double rayleigh(const RunContext& ctx, const StateVector& x, StateVector& hx) {
  restricted_apply(ctx.op, ctx.forbidden, x, hx);
  return x.dot(hx).real();
}

}  // namespace

SingleRun rq_descent_run(const RunContext& ctx, const StateVector& start) {
  const Index n = ctx.op.dim();
  SingleRun run;
  StateVector x = start;
  StateVector hx(n);
  double theta = rayleigh(ctx, x, hx);
  StateVector p;  // previous update direction, empty on the first step

  for (int it = 0;; ++it) {
    run.trace.push_back(theta);
    StateVector residual = hx - theta * x;
    run.theta = theta;
    run.vector = x;
    run.iterations = it;
    if (2.0 * residual.norm() <= ctx.tolerance) {
      // hx is carried through the Ritz updates; confirm with a fresh product.
      theta = rayleigh(ctx, x, hx);
      residual = hx - theta * x;
      run.theta = theta;
      if (2.0 * residual.norm() <= ctx.tolerance) {
        run.converged = true;
        return run;
      }
    }
    if (it >= ctx.budget) return run;

    // Rayleigh-Ritz over span{x, g, p}.
    std::vector<StateVector> span{x, residual};
    if (p.size() == n) span.push_back(p);
    std::vector<StateVector> basis;
    for (auto& s : span) {
      StateVector u = s;
      remove_components(ctx.forbidden, u);
      const double original = u.norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) u -= b.dot(u) * b;
      }
      const double remaining = u.norm();
      if (original > 0.0 && remaining > 1e-12 * original) basis.push_back(u / remaining);
    }
    const Index k = static_cast<Index>(basis.size());
    DenseMatrix s(n, k);
    DenseMatrix hs(n, k);
    for (Index j = 0; j < k; ++j) {
      s.col(j) = basis[static_cast<std::size_t>(j)];
      if (j == 0) {
        hs.col(0) = hx;
      } else {
        StateVector col(n);
        restricted_apply(ctx.op, ctx.forbidden, s.col(j), col);
        hs.col(j) = col;
      }
    }
    DenseMatrix small = s.adjoint() * hs;
    small = (0.5 * (small + small.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(small);
    StateVector next = s * es.eigenvectors().col(0);
    next.normalize();
    StateVector h_next = hs * es.eigenvectors().col(0);
    h_next /= (s * es.eigenvectors().col(0)).norm();
    double next_theta = next.dot(h_next).real();

    // Near convergence the true decrease drops below rounding.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * ctx.scale;
    if (!(next_theta <= theta + slack)) {
      // Subspace step did not decrease θ: halve a plain gradient step.
      const StateVector g = 2.0 * residual;
      double step = 1.0 / ctx.scale;
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
        StateVector trial = x - step * g;
        remove_components(ctx.forbidden, trial);
        trial.normalize();
        StateVector h_trial(n);
        const double trial_theta = rayleigh(ctx, trial, h_trial);
        if (trial_theta <= theta) {
          next = trial;
          h_next = h_trial;
          next_theta = trial_theta;
          accepted = true;
          break;
        }
      }
      run.notes.push_back("rq_descent step-halving fallback at iteration " +
                          std::to_string(it) + (accepted ? "" : " (no decrease found)"));
      if (!accepted) return run;
      p.resize(0);
    } else {
      const Complex along = x.dot(next);
      p = next - along * x;
    }
    x = next;
    hx = h_next;
    theta = next_theta;
  }
}

}  // namespace levelshift::detail
