#include "ground_internal.hpp"

namespace levelshift::detail {

SingleRun shifted_power_run(const RunContext& ctx, const StateVector& start) {
  const Index n = ctx.op.dim();
  // σ >= λ_max makes σI - H positive semidefinite, so its dominant
  // eigenvector is the ground state of H.
  const double sigma = ctx.op.upper_bound();
  SingleRun run;
  if (ctx.op.bounds_are_heuristic()) {
    run.notes.push_back("shifted_power: sigma from power-iteration estimate");
  }
  StateVector x = start;
  StateVector hx(n);
  for (int it = 0;; ++it) {
    restricted_apply(ctx.op, ctx.forbidden, x, hx);
    const double theta = x.dot(hx).real();
    run.trace.push_back(theta);
    run.theta = theta;
    run.vector = x;
    run.iterations = it;
    if ((hx - theta * x).norm() <= ctx.tolerance) {
      run.converged = true;
      return run;
    }
    if (it >= ctx.budget) return run;
    StateVector y = sigma * x - hx;
    remove_components(ctx.forbidden, y);
    const double norm = y.norm();
    if (norm == 0.0) return run;
    x = y / norm;
  }
}

}  // namespace levelshift::detail
