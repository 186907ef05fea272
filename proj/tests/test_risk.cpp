#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "minmaxlab/risk.hpp"
#include "oracles.hpp"

using namespace minmaxlab;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  for (int m : {1, 2, 5, 10, 17}) {
    const auto& rule = gauss_legendre(m);
    double wsum = 0.0, even = 0.0;
    for (int i = 0; i < m; ++i) {
      wsum += rule.weights[i];
      even += rule.weights[i] * std::pow(rule.nodes[i], 2 * (m - 1));
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(even == doctest::Approx(2.0 / (2 * m - 1)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature absolute moments") {
  for (double q : {1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0}) {
    const double v = gaussian_error_risk(LossSpec::power(q), 0.0, 1.0);
    CHECK(std::abs(v / oracle::abs_normal_moment(q) - 1.0) < 1e-8);
  }
}

TEST_CASE("quadrature converges: doubling nodes changes the value by < 1e-10") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mu(-3.0, 3.0), s(0.05, 2.0), p(1.01, 5.0);
  for (int i = 0; i < 50; ++i) {
    const auto loss = LossSpec::power(p(rng));
    const double m = mu(rng), sd = s(rng);
    const double a = gaussian_error_risk(loss, m, sd, 200);
    const double b = gaussian_error_risk(loss, m, sd, 400);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, a));
  }
  for (const auto& loss : {LossSpec::huber(0.7), LossSpec::sum({LossSpec::huber(2.0),
                                                                LossSpec::power(1.3)})}) {
    const double a = gaussian_error_risk(loss, 0.4, 1.1, 200);
    const double b = gaussian_error_risk(loss, 0.4, 1.1, 400);
    CHECK(std::abs(a - b) < 1e-10);
  }
}

TEST_CASE("quadrature matches the fourth-moment expansion off centre") {
  for (double mu : {-2.0, -0.3, 0.0, 0.7, 4.0}) {
    for (double s : {0.1, 0.9, 2.0}) {
      CHECK(gaussian_error_risk(LossSpec::power(4.0), mu, s) ==
            doctest::Approx(oracle::fourth_moment(mu, s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("risk examples") {
  const LossSpec l2 = LossSpec::power(2.0);
  for (double theta : {-10.0, 0.0, 3.0}) {
    CHECK(risk({4, 1.0}, AffineMean{1.0, 0.0}, l2, theta).value ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(risk({1, 1.0}, AffineMean{1.0, 0.0}, LossSpec::power(1.0), theta).value ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
    CHECK(risk({1, 1.0}, AffineMean{1.0, 0.0}, LossSpec::power(4.0), theta).value ==
          doctest::Approx(3.0).epsilon(1e-12));
  }
  const auto r = risk({1, 1.0}, AffineMean{0.0, 0.0}, l2, 2.0);
  CHECK(r.value == 4.0);
  CHECK(r.std_error == 0.0);
}

TEST_CASE("risk errors") {
  try {
    risk({5, 1.0}, SampleMedian{0.0}, LossSpec::power(2.0), 0.0, Quadrature{});
    FAIL("expected QuadratureUnsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureUnsupported);
  }
  try {
    // exp(-z^2/2) cannot tame |x|^700 on the truncated range.
    risk({1, 1.0}, AffineMean{1.0, 0.0}, LossSpec::power(700.0), 0.0, Quadrature{});
    FAIL("expected NonFiniteRisk");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFiniteRisk);
  }
}

TEST_CASE("crosscheck_risk") {
  const auto a = crosscheck_risk({1, 1.0}, AffineMean{1.0, 0.0}, LossSpec::power(2.0), 0.0, 1000000, 3);
  CHECK(a.z_score < 4.0);
  CHECK(a.mc.std_error > 0.0);
  const auto b = crosscheck_risk({1, 1.0}, AffineMean{0.8, 0.0}, LossSpec::power(2.5), 2.0, 1000000, 3);
  CHECK(b.z_score < 4.0);
  const auto c = crosscheck_risk({1, 1.0}, AffineMean{0.0, 0.0}, LossSpec::power(2.0), 0.0, 10000, 1);
  CHECK(c.quad.value == 0.0);
  CHECK(c.mc.value == 0.0);
  CHECK(c.z_score == 0.0);
}

TEST_CASE("quadrature and Monte Carlo agree on random instances") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> g(0.2, 1.5), b(-1.0, 1.0), p(1.0, 4.0), t(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const auto cc = crosscheck_risk({2, 1.5}, AffineMean{g(rng), b(rng)}, LossSpec::power(p(rng)),
                                    t(rng), 200000, derive_seed(99, i));
    CHECK(cc.z_score < 4.0);
  }
}

TEST_CASE("worst_case_risk examples") {
  const Interval theta(-3.0, 3.0);
  SUBCASE("gamma = 1 is constant") {
    const auto w = worst_case_risk({1, 1.0}, AffineMean{1.0, 0.0}, LossSpec::power(2.0), theta);
    CHECK(w.constant_in_theta);
    CHECK(w.sup_value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("shrinkage attains its sup at the endpoints") {
    const auto w = worst_case_risk({1, 1.0}, AffineMean{0.8, 0.0}, LossSpec::power(2.0), theta);
    CHECK_FALSE(w.constant_in_theta);
    CHECK(w.sup_value == doctest::Approx(oracle::affine_l2_risk(0.8, 0, 3, 1, 1)).epsilon(1e-10));
    CHECK(w.sup_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(w.argmax_theta) == doctest::Approx(3.0));
  }
  SUBCASE("fourth power") {
    const auto w = worst_case_risk({1, 1.0}, AffineMean{0.9, 0.0}, LossSpec::power(4.0), theta);
    CHECK(w.sup_value == doctest::Approx(oracle::fourth_moment(0.3, 0.9)).epsilon(1e-10));
    CHECK(w.sup_value == doctest::Approx(2.4133).epsilon(1e-3));
  }
  SUBCASE("asymmetric shift picks the far endpoint") {
    // |bias| = |0.4 - 0.5 theta| is 1.9 at theta = -3 and 1.1 at theta = 3.
    const auto w = worst_case_risk({1, 1.0}, AffineMean{0.5, 0.4}, LossSpec::huber(1.0), theta);
    CHECK(w.argmax_theta == doctest::Approx(-3.0));
  }
  SUBCASE("sup dominates every grid risk") {
    const EstimatorSpec est = AffineMean{1.2, 0.3};
    const auto w = worst_case_risk({1, 1.0}, est, LossSpec::power(3.0), theta, {.grid = 64});
    for (int i = 0; i <= 100; ++i) {
      const double t = -3.0 + 0.06 * i;
      CHECK(risk({1, 1.0}, est, LossSpec::power(3.0), t).value <= w.sup_value + 1e-12);
    }
    CHECK(theta.contains(w.argmax_theta));
  }
  SUBCASE("grid too small") {
    CHECK_THROWS_AS(
        worst_case_risk({1, 1.0}, AffineMean{0.8, 0.0}, LossSpec::power(2.0), theta, {.grid = 8}),
        Error);
  }
}

TEST_CASE("Monte Carlo worst case of a sign-perturbed rule") {
  // Squared-error risk is 1 + eps^2 - 4 eps phi(theta - theta_star).
  const SignPerturbed est{AffineMean{1.0, 0.0}, 0.5, 0.0};
  WorstCaseOptions opts;
  opts.mc_samples = 20000;
  opts.seed = 4;
  const auto w = worst_case_risk({1, 1.0}, est, LossSpec::power(2.0), Interval(-3.0, 1.0), opts);
  CHECK(w.argmax_theta == doctest::Approx(-3.0));
  CHECK(w.std_error > 0.0);
}

TEST_CASE("scaling equivariance of worst-case risk") {
  const Interval theta(-3.0, 3.0);
  const std::vector<LossSpec> losses{LossSpec::power(2.0), LossSpec::power(2.5),
                                     LossSpec::huber(0.8)};
  for (const auto& loss : losses) {
    for (double lambda : {0.1, 7.0, 1234.5}) {
      for (auto est : {AffineMean{0.8, 0.0}, AffineMean{1.3, -0.2}}) {
        const auto a = worst_case_risk({1, 1.0}, est, loss, theta);
        const auto b = worst_case_risk({1, 1.0}, est, scale_loss(loss, lambda), theta);
        CHECK(std::abs(b.sup_value / (lambda * a.sup_value) - 1.0) < 1e-8);
        CHECK(b.argmax_theta == a.argmax_theta);
      }
    }
  }
}

TEST_CASE("affine risk is even and increasing in the bias") {
  const LossSpec loss = LossSpec::power(2.7);
  const double s = 0.6;
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double bias = 0.1 * i;
    const double up = gaussian_error_risk(loss, bias, s);
    const double down = gaussian_error_risk(loss, -bias, s);
    CHECK(up == doctest::Approx(down).epsilon(1e-12));
    CHECK(up > prev);
    prev = up;
  }
}

TEST_CASE("Monte Carlo risk of the median") {
  const auto r = risk({101, 1.0}, SampleMedian{0.0}, LossSpec::power(2.0), 0.0,
                      MonteCarlo{100000, 1});
  const double oracle = std::numbers::pi / (2.0 * 101);
  CHECK(std::abs(r.value - oracle) / oracle < 0.10);
  CHECK(r.std_error > 0.0);

  WorstCaseOptions opts;
  opts.mc_samples = 20000;
  const auto w = worst_case_risk({11, 1.0}, SampleMedian{0.0}, LossSpec::power(2.0),
                                 Interval(-3.0, 3.0), opts);
  CHECK(w.constant_in_theta);
}
