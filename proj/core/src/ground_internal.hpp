#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levelshift/ground_engines.hpp"

namespace levelshift::detail {

/// One lowest-vector search in the orthogonal complement of `forbidden`.
struct SingleRun {
  double theta = 0.0;
  StateVector vector;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
  std::vector<std::string> notes;
};

struct RunContext {
  const HermitianOperator& op;
  /// Orthonormal columns the search must stay orthogonal to.
  const DenseMatrix& forbidden;
  int budget = 0;
  /// Absolute residual target.
  double tolerance = 0.0;
  double scale = 1.0;
};

using SingleSolver =
    std::function<SingleRun(const RunContext&, const StateVector& start)>;

/// out = (I - F F^H) H v
void restricted_apply(const HermitianOperator& op, const DenseMatrix& forbidden,
                      const StateVector& v, StateVector& out);

/// v <- (I - F F^H) v, applied twice.
void remove_components(const DenseMatrix& forbidden, StateVector& v);

SingleRun lanczos_run(const RunContext& ctx, const StateVector& start);
SingleRun rq_descent_run(const RunContext& ctx, const StateVector& start);
SingleRun shifted_power_run(const RunContext& ctx, const StateVector& start);

/// Repeats `single` against a growing set of converged vectors until the
/// next eigenvalue clears the degeneracy gap; returns the ground eigenspace
/// of the operator restricted to the complement of `forbidden`.
GroundResult resolve_ground(const HermitianOperator& op,
                            const DenseMatrix& forbidden, const SolverConfig& cfg,
                            Engine engine, const SingleSolver& single,
                            const std::optional<StateVector>& first_start);

/// Lowest eigenspace of the dense restriction Q^H H Q mapped back by Q.
GroundResult exact_restricted_ground(const HermitianOperator& op,
                                     const DenseMatrix& forbidden,
                                     const SolverConfig& cfg);

/// Splits ascending eigenvalues into clusters whose neighbours are within
/// `gap`; returns [begin, end) index pairs.
std::vector<std::pair<Index, Index>> cluster_sorted(const Eigen::VectorXd& values,
                                                    double gap);

}  // namespace levelshift::detail
