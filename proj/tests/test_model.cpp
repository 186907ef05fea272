#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "minmaxlab/model.hpp"

using namespace minmaxlab;

TEST_CASE("model and interval validation") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), Error);
  CHECK_THROWS_AS(Interval(0.0, INFINITY), Error);
  CHECK_THROWS_AS(GaussianLocationModel(0, 1.0), Error);
  CHECK_THROWS_AS(GaussianLocationModel(1, 0.0), Error);
  CHECK(GaussianLocationModel(4, 1.0).mean_sd() == 0.5);
  CHECK(default_theta_interval().lo == -50.0);
  CHECK(default_theta_interval().hi == 50.0);
}

TEST_CASE("error_law for affine rules is exact") {
  const auto law1 = std::get<AffineGaussian>(error_law({1, 1.0}, AffineMean{1.0, 0.0}, 5.0));
  CHECK(law1.mu == 0.0);
  CHECK(law1.s == 1.0);

  const auto law2 = std::get<AffineGaussian>(error_law({4, 1.0}, AffineMean{1.0, 0.0}, 0.0));
  CHECK(law2.mu == 0.0);
  CHECK(law2.s == 0.5);

  const auto law3 = std::get<AffineGaussian>(error_law({1, 1.0}, AffineMean{0.8, 0.1}, 2.0));
  CHECK(law3.mu == doctest::Approx(-0.3).epsilon(1e-14));
  CHECK(law3.s == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("gamma = 1 error law does not depend on theta") {
  for (double theta : {-40.0, -1.0, 0.0, 3.3, 49.0}) {
    const auto law = std::get<AffineGaussian>(error_law({9, 2.0}, AffineMean{1.0, 0.25}, theta));
    CHECK(law.mu == 0.25);
    CHECK(law.s == doctest::Approx(2.0 / 3.0));
  }
}

TEST_CASE("error_law simulates non-affine rules") {
  const GaussianLocationModel model(5, 1.0);
  const auto law = error_law(model, SampleMedian{0.0}, 1.0, {20000, 11});
  const auto& emp = std::get<Empirical>(law);
  CHECK(emp.samples.size() == 20000);
  CHECK(emp.seed == 11);
  CHECK_THROWS_AS(error_law(model, SampleMedian{0.0}, 1.0, {100, 11}), Error);
}

TEST_CASE("simulate_estimates") {
  SUBCASE("sample mean is centred") {
    const auto xs = simulate_estimates({1, 1.0}, AffineMean{1.0, 0.0}, 0.0, 1000000, 7);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    CHECK(std::abs(mean) < 4.0 / std::sqrt(1e6));
  }
  SUBCASE("constant estimator") {
    for (double theta : {-2.0, 0.1, 7.0}) {
      const auto xs = simulate_estimates({3, 2.0}, AffineMean{0.0, 3.5}, theta, 5, 1);
      CHECK(xs == std::vector<double>(5, 3.5));
    }
  }
  SUBCASE("median variance matches the asymptotic oracle") {
    const auto xs = simulate_estimates({101, 1.0}, SampleMedian{0.0}, 0.0, 100000, 1);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (xs.size() - 1);
    const double oracle = std::numbers::pi / (2.0 * 101);
    CHECK(std::abs(var - oracle) / oracle < 0.10);
  }
  SUBCASE("equal seeds are bit-identical, different seeds differ") {
    const auto a = simulate_estimates({3, 1.0}, SampleMedian{0.2}, 1.0, 1000, 42);
    const auto b = simulate_estimates({3, 1.0}, SampleMedian{0.2}, 1.0, 1000, 42);
    const auto c = simulate_estimates({3, 1.0}, SampleMedian{0.2}, 1.0, 1000, 43);
    CHECK(a == b);
    CHECK(a != c);
  }
  SUBCASE("even n uses the midpoint of the middle order statistics") {
    // n = 2: the median is the sample mean, so its variance is sigma^2 / 2.
    const auto xs = simulate_estimates({2, 1.0}, SampleMedian{0.0}, 0.0, 200000, 5);
    double var = 0.0;
    for (double x : xs) var += x * x;
    var /= xs.size();
    CHECK(var == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("sign perturbation moves the estimate toward theta_star") {
  const SignPerturbed est{AffineMean{1.0, 0.0}, 0.1, 0.0};
  const auto base = simulate_estimates({1, 1.0}, AffineMean{1.0, 0.0}, 2.0, 1000, 9);
  const auto pert = simulate_estimates({1, 1.0}, est, 2.0, 1000, 9);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double toward = base[i] < 0.0 ? 1.0 : -1.0;
    CHECK((pert[i] - base[i]) * toward == doctest::Approx(0.1));
  }
}

TEST_CASE("estimator validation") {
  CHECK_THROWS_AS(validate(SignPerturbed{AffineMean{}, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(SignPerturbed{AffineMean{}, -1.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(AffineMean{NAN, 0.0}), Error);
  CHECK_NOTHROW(validate(SignPerturbed{SampleMedian{0.1}, 0.5, 1.0}));
  CHECK(describe(SignPerturbed{SampleMedian{0.5}, 0.25, 1.0}) ==
        "SignPerturbed(SampleMedian(beta=0.5), epsilon=0.25, theta_star=1)");
}

TEST_CASE("derive_seed splits streams") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t c = 0; c < 1000; ++c) seeds.insert(derive_seed(123, c));
  CHECK(seeds.size() == 1000);
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));

  // Streams from neighbouring counters are uncorrelated.
  const auto a = simulate_estimates({1, 1.0}, AffineMean{}, 0.0, 100000, derive_seed(5, 0));
  const auto b = simulate_estimates({1, 1.0}, AffineMean{}, 0.0, 100000, derive_seed(5, 1));
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += a[i] * b[i];
  cov /= a.size();
  CHECK(std::abs(cov) < 4.0 / std::sqrt(1e5));
}
