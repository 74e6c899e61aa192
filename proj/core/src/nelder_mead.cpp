#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace levelshift::detail {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

std::vector<double> affine(const std::vector<double>& a, const std::vector<double>& b,
                           double t) {
  // a + t (b - a)
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) return {x0, f(x0), 0};

  std::vector<Vertex> simplex;
  simplex.push_back({x0, f(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += options.initial_step;
    simplex.push_back({x, f(x)});
  }

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();
    double xspread = 0.0;
    for (const auto& v : simplex) {
      for (std::size_t i = 0; i < n; ++i) {
        xspread = std::max(xspread, std::abs(v.x[i] - best.x[i]));
      }
    }
    const double fspread = std::abs(worst.f - best.f);
    if ((std::isfinite(worst.f) && fspread <= options.ftol * (1.0 + std::abs(best.f))) ||
        xspread <= options.xtol) {
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].x[i] / static_cast<double>(n);
    }
    const auto xr = affine(centroid, worst.x, -1.0);
    const double fr = f(xr);
    if (fr < best.f) {
      const auto xe = affine(centroid, worst.x, -2.0);
      const double fe = f(xe);
      simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < simplex[n - 1].f) {
      simplex.back() = {xr, fr};
      continue;
    }
    const bool outside = fr < worst.f;
    const auto xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, worst.x, 0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, worst.f)) {
      simplex.back() = {xc, fc};
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      simplex[k].x = affine(simplex.front().x, simplex[k].x, 0.5);
      simplex[k].f = f(simplex[k].x);
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  return {simplex.front().x, simplex.front().f, it};
}

}  // namespace levelshift::detail
