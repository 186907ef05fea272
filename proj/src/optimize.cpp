#include "minmaxlab/optimize.hpp"

#include <algorithm>
#include <numeric>

#include "minmaxlab/error.hpp"

namespace minmaxlab {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& steps,
                             const NelderMeadOptions& opts) {
  const std::size_t dim = start.size();
  require(dim >= 1 && steps.size() == dim, ErrorKind::InvalidArgument,
          "nelder_mead needs a start point and one step per coordinate");

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += steps[i];

  NelderMeadResult result;
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);
  result.evaluations = static_cast<int>(dim + 1);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Ties broken by vertex index keeps runs deterministic.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> v2;
    for (auto i : order) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) d = std::max(d, distance(simplex[i], simplex[0]));
    return d;
  };
  auto combine = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                     double coef) {
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = centroid[j] + coef * (worst[j] - centroid[j]);
    return x;
  };

  sort_simplex();
  for (; result.iterations < opts.max_iterations; ++result.iterations) {
    if (diameter() < opts.xtol) break;
    if (values[dim] - values[0] <= opts.ftol * (1.0 + std::abs(values[0])) &&
        diameter() < 1e3 * opts.xtol) {
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);

    const auto xr = combine(centroid, simplex[dim], -1.0);
    const double fr = f(xr);
    ++result.evaluations;
    if (fr < values[0]) {
      const auto xe = combine(centroid, simplex[dim], -2.0);
      const double fe = f(xe);
      ++result.evaluations;
      if (fe < fr) {
        simplex[dim] = xe;
        values[dim] = fe;
      } else {
        simplex[dim] = xr;
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex[dim] = xr;
      values[dim] = fr;
    } else {
      const bool outside = fr < values[dim];
      const auto xc = combine(centroid, outside ? xr : simplex[dim], 0.5);
      const double fc = f(xc);
      ++result.evaluations;
      if (fc < (outside ? fr : values[dim])) {
        simplex[dim] = xc;
        values[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          values[i] = f(simplex[i]);
          ++result.evaluations;
        }
      }
    }
    sort_simplex();
  }

  result.x = simplex[0];
  result.value = values[0];
  result.simplex_size = diameter();
  return result;
}

}  // namespace minmaxlab
