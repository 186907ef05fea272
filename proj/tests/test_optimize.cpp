#include <doctest.h>

#include <cmath>

#include "minmaxlab/optimize.hpp"

using namespace minmaxlab;

TEST_CASE("golden_section_maximize") {
  const auto r = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0, 1e-8);
  CHECK(r.x == doctest::Approx(0.3).epsilon(1e-7));
  // Monotone function: converges to the right end of the bracket.
  const auto e = golden_section_maximize([](double x) { return x; }, 0.0, 1.0, 1e-6);
  CHECK(e.x > 1.0 - 1e-6);
}

TEST_CASE("nelder_mead on Rosenbrock") {
  auto rosen = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, {0.1, 0.1});
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.simplex_size < 1e-6);
}

TEST_CASE("nelder_mead handles a kink") {
  auto f = [](const std::vector<double>& x) { return std::abs(x[0] - 0.25) + (x[1] + 1) * (x[1] + 1); };
  const auto r = nelder_mead(f, {1.0, 1.0}, {0.2, 0.2});
  CHECK(r.x[0] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("nelder_mead is deterministic") {
  auto f = [](const std::vector<double>& x) { return std::cos(3 * x[0]) + x[0] * x[0]; };
  const auto a = nelder_mead(f, {2.0}, {0.5});
  const auto b = nelder_mead(f, {2.0}, {0.5});
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}
