#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace minmaxlab {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a maximum of f on [a, b]; stops once the
/// bracket is narrower than tol. Returns the best point evaluated.
template <typename Fn>
ScalarOptimum golden_section_maximize(Fn&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  ScalarOptimum best{fc >= fd ? c : d, fc >= fd ? fc : fd, 2};
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc > best.value) best = {c, fc, best.evaluations};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd > best.value) best = {d, fd, best.evaluations};
    }
    ++best.evaluations;
  }
  return best;
}

struct NelderMeadOptions {
  /// Stop when the simplex diameter (max vertex distance to the best vertex) drops below this.
  double xtol = 1e-8;
  /// Or when the spread of vertex values is below ftol * (1 + |best|).
  double ftol = 1e-15;
  int max_iterations = 5000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  double simplex_size = 0.0;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// `steps` gives the initial simplex offsets per coordinate.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& steps,
                             const NelderMeadOptions& opts = {});

}  // namespace minmaxlab
