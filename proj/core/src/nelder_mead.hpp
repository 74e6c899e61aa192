#pragma once

#include <functional>
#include <vector>

namespace levelshift::detail {

struct NelderMeadOptions {
  double initial_step = 0.1;
  int max_iterations = 400;
  /// Stop once the simplex values agree to ftol or its vertices to xtol.
  double ftol = 1e-12;
  double xtol = 1e-9;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). +inf values are allowed and simply lose every comparison.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options);

}  // namespace levelshift::detail
