#include "levelshift/deflation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dimension_check.hpp"
#include "levelshift/error.hpp"

namespace levelshift {

std::string_view to_string(ShiftVerdict verdict) noexcept {
  switch (verdict) {
    case ShiftVerdict::valid: return "valid";
    case ShiftVerdict::too_small: return "too_small";
    case ShiftVerdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

HermitianOperator build_deflated(const HermitianOperator& h, const Eigenspace& ground,
                                 double shift, double residual_tol) {
  if (!(shift > 0.0)) {
    throw Error(ErrorCode::shift_rejected,
                "shift K = " + std::to_string(shift) + " must be > 0");
  }
  if (ground.basis.empty()) {
    throw Error(ErrorCode::invalid_argument, "ground eigenspace has an empty basis");
  }
  const DenseMatrix q = ground.columns();
  detail::require_same_dim(h.dim(), q.rows(), "build_deflated");
  const double deviation = gram_deviation(q);
  if (deviation > 1e-10) {
    throw Error(ErrorCode::invalid_argument,
                "ground basis is not orthonormal (Gram deviation " +
                    std::to_string(deviation) + ")");
  }
  const double limit = residual_tol * h.spectral_scale();
  for (const auto& v : ground.basis) {
    const double r = residual_norm(h, v, ground.eigenvalue);
    if (r > limit) {
      throw Error(ErrorCode::invalid_argument,
                  "ground vector residual " + std::to_string(r) + " exceeds " +
                      std::to_string(limit));
    }
  }
  return h.with_shift(shift, Projector(q));
}

ShiftChoice select_shift(const HermitianOperator& h, const Eigenspace& ground) {
  ShiftChoice choice;
  choice.upper_bound = h.base_upper_bound();
  choice.heuristic = h.bounds_are_heuristic();
  const double span = std::max(0.0, choice.upper_bound - ground.eigenvalue);
  choice.shift = span + std::max(1.0, 0.1 * span);
  return choice;
}

ShiftValidation validate_shift(const HermitianOperator& h1, double ground_energy,
                               double shift, const SolverConfig& cfg) {
  if (h1.shifts().empty()) {
    throw Error(ErrorCode::invalid_argument,
                "validate_shift expects an operator produced by build_deflated");
  }
  const Projector& deflated = h1.shifts().back().projector;
  ShiftValidation out;
  out.ground = solve_ground(h1, cfg);
  out.measured_min = out.ground.eigenspace.eigenvalue;

  const DenseMatrix g = out.ground.eigenspace.columns();
  const DenseMatrix cross = deflated.columns().adjoint() * g;
  out.overlap = cross.squaredNorm() / static_cast<double>(g.cols());

  const double band = 10.0 * cfg.residual_tol * out.ground.spectral_scale;
  const double distance = std::abs(out.measured_min - (ground_energy + shift));
  std::ostringstream diag;
  diag.precision(17);
  if (!out.ground.converged) {
    out.verdict = ShiftVerdict::indeterminate;
    diag << "ground solve of the deflated operator did not converge";
  } else if (distance > band) {
    out.verdict = ShiftVerdict::valid;
    diag << "min " << out.measured_min << " differs from E0+K = "
         << ground_energy + shift;
  } else if (out.overlap > 0.99) {
    out.verdict = ShiftVerdict::too_small;
    diag << "min equals E0+K and the minimizer lies in the deflated space (overlap "
         << out.overlap << ")";
  } else {
    out.verdict = ShiftVerdict::indeterminate;
    diag << "min equals E0+K but the minimizer overlaps the deflated space only "
         << out.overlap << " (E1 = E0+K crossing)";
  }
  out.diagnostic = diag.str();
  return out;
}

FirstExcitedResult deflate_once(const HermitianOperator& h, const GroundResult& ground,
                                const SolverConfig& cfg,
                                const FirstExcitedOptions& options) {
  FirstExcitedResult out;
  out.ground = ground;
  const Eigenspace& g = ground.eigenspace;

  double shift = 0.0;
  bool heuristic = false;
  if (options.shift) {
    shift = *options.shift;
  } else {
    const ShiftChoice choice = select_shift(h, g);
    shift = choice.shift;
    heuristic = choice.heuristic;
  }
  // Ground vectors from iterative engines satisfy the solver tolerance; the
  // build check allows a decade of slack on top.
  const double build_tol = std::max(1e-8, 10.0 * cfg.residual_tol);

  std::vector<double> rejected;
  std::ostringstream history;
  history.precision(17);
  for (int attempt = 0;; ++attempt) {
    HermitianOperator h1 = build_deflated(h, g, shift, build_tol);
    ShiftValidation validation = validate_shift(h1, g.eigenvalue, shift, cfg);
    history << " K=" << shift << ":" << to_string(validation.verdict);
    const bool accept = validation.verdict == ShiftVerdict::valid || !options.escalate;
    if (accept) {
      out.level.shift = shift;
      out.level.ground_energy = g.eigenvalue;
      out.level.projector = h1.shifts().back().projector;
      out.level.op = std::move(h1);
      out.level.validation = std::move(validation);
      out.level.heuristic_shift = heuristic;
      out.level.rejected_shifts = std::move(rejected);
      break;
    }
    if (attempt >= kMaxShiftEscalations) {
      throw Error(ErrorCode::escalation_exhausted,
                  "no valid shift after " + std::to_string(kMaxShiftEscalations) +
                      " escalations;" + history.str() + "; last: " +
                      validation.diagnostic);
    }
    rejected.push_back(shift);
    shift *= validation.verdict == ShiftVerdict::too_small ? 2.0 : 1.37;
  }

  out.excited = out.level.validation.ground.eigenspace;
  out.excited.residual_norms.clear();
  double worst = 0.0;
  for (const auto& v : out.excited.basis) {
    const double r = residual_norm(h, v, out.excited.eigenvalue);
    out.excited.residual_norms.push_back(r);
    worst = std::max(worst, r);
  }
  out.residual_vs_input = worst;
  out.eigenvectors_verified =
      out.level.validation.ground.converged &&
      worst <= 10.0 * cfg.residual_tol * out.level.validation.ground.spectral_scale;
  return out;
}

FirstExcitedResult first_excited(const HermitianOperator& h, const SolverConfig& cfg,
                                 const FirstExcitedOptions& options) {
  if (h.dim() < 2) {
    throw Error(ErrorCode::invalid_argument, "first_excited requires dim >= 2");
  }
  const GroundResult ground = solve_ground(h, cfg);
  if (!ground.converged) {
    throw Error(ErrorCode::not_converged,
                "ground solve of the input operator did not converge after " +
                    std::to_string(ground.iterations) + " iterations");
  }
  if (ground.eigenspace.multiplicity() >= static_cast<std::size_t>(h.dim())) {
    throw Error(ErrorCode::spectrum_exhausted,
                "the operator has a single distinct eigenvalue; no excited state");
  }
  return deflate_once(h, ground, cfg, options);
}

LadderResult ladder(const HermitianOperator& h, int k, const SolverConfig& cfg) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "ladder depth k must be >= 1");
  LadderResult out;
  GroundResult ground = solve_ground(h, cfg);
  if (!ground.converged) {
    throw Error(ErrorCode::not_converged, "ground solve of the input operator failed");
  }
  out.spectra.push_back({ground.eigenspace.eigenvalue,
                         ground.eigenspace.multiplicity(), ground.iterations});

  HermitianOperator current = h;
  std::size_t deflated_rank = 0;
  for (int level = 1; level <= k; ++level) {
    if (deflated_rank + ground.eigenspace.multiplicity() >=
        static_cast<std::size_t>(h.dim())) {
      throw Error(ErrorCode::spectrum_exhausted,
                  "requested excited level " + std::to_string(k) +
                      " but the operator has only " + std::to_string(level) +
                      " distinct eigenvalues");
    }
    FirstExcitedResult step = deflate_once(current, ground, cfg);
    const GroundResult& next = step.level.validation.ground;
    if (!next.converged) {
      throw Error(ErrorCode::not_converged,
                  "ground solve at ladder level " + std::to_string(level) + " failed");
    }
    if (!(next.eigenspace.eigenvalue > out.spectra.back().eigenvalue)) {
      throw Error(ErrorCode::not_converged,
                  "ladder level " + std::to_string(level) +
                      " did not increase the ground energy");
    }
    deflated_rank += ground.eigenspace.multiplicity();
    out.validity_checks.push_back({step.level.validation.verdict == ShiftVerdict::valid,
                                   step.level.validation.verdict,
                                   step.level.validation.measured_min});
    out.spectra.push_back({next.eigenspace.eigenvalue, next.eigenspace.multiplicity(),
                           next.iterations});
    current = step.level.op;
    ground = next;
    out.levels.push_back(std::move(step.level));
  }

  out.target = ground.eigenspace;
  out.target.residual_norms.clear();
  for (const auto& v : out.target.basis) {
    const double r = residual_norm(h, v, out.target.eigenvalue);
    out.target.residual_norms.push_back(r);
    out.target_residual = std::max(out.target_residual, r);
  }
  return out;
}

}  // namespace levelshift
