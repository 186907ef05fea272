#include <doctest.h>

#include <cmath>

#include "minmaxlab/exclusivity.hpp"
#include "minmaxlab/serialize.hpp"
#include "oracles.hpp"

using namespace minmaxlab;

namespace {

const GaussianLocationModel kUnit{1, 1.0};
const Interval kNarrow{-3.0, 3.0};
const Interval kWide{-50.0, 50.0};

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("grad_worst_case") {
  const std::vector<double> star{0.9, 0.0};
  const auto g4 = grad_worst_case(kUnit, AffineMeanFamily{}, star, LossSpec::power(4.0), kNarrow);
  CHECK(g4[0] == doctest::Approx(oracle::affine_l4_sup_derivative_m3(0.9)).epsilon(1e-4));
  CHECK(std::abs(g4[0] - 0.648) < 0.02);

  const auto g2 = grad_worst_case(kUnit, AffineMeanFamily{}, star, LossSpec::power(2.0), kNarrow);
  CHECK(norm(g2) < 1e-3);

  const auto gw = grad_worst_case(kUnit, AffineMeanFamily{}, {1.0, 0.0}, LossSpec::power(2.0), kWide);
  CHECK(std::abs(gw[1]) < 1e-6);

  CHECK_THROWS_AS(
      grad_worst_case(kUnit, AffineMeanFamily{}, {1.5, 0.0}, LossSpec::power(2.0), kNarrow), Error);
}

TEST_CASE("refutation on a bounded interval") {
  const auto c = refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(2.0),
                                         LossSpec::power(4.0), kNarrow);
  CHECK(c.verdict == Verdict::Refuted);
  CHECK(c.p == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c.q == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(c.delta_Rq < 0.0);
  CHECK(c.alpha > 0.0);
  CHECK(c.taylor_slope_p >= 1.7);
  CHECK(c.taylor_slope_p <= 2.3);
  CHECK(c.gradient_q[0] == doctest::Approx(0.648).epsilon(0.02 / 0.648));
  CHECK(norm(c.direction) == doctest::Approx(1.0).epsilon(1e-12));
  // Descent in gamma means moving back toward the fourth-power optimum.
  CHECK(c.direction[0] < 0.0);
  REQUIRE(c.ladder.size() == 9);
  for (std::size_t i = 1; i < c.ladder.size(); ++i) CHECK(c.ladder[i].alpha < c.ladder[i - 1].alpha);
  // R_2 = gamma^2 + 9 (1 - gamma)^2 has curvature 20, so dR_p ~ 10 alpha^2.
  for (const auto& step : c.ladder) {
    CHECK(std::abs(step.delta_Rp) <= 10.5 * step.alpha * step.alpha);
  }
}

TEST_CASE("refutation in the other direction") {
  const auto c = refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(4.0),
                                         LossSpec::power(2.0), kNarrow);
  CHECK(c.verdict == Verdict::Refuted);
  CHECK(c.delta_Rq < 0.0);
  CHECK(c.direction[0] > 0.0);
}

TEST_CASE("same class is a precondition failure") {
  try {
    refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(2.0),
                            LossSpec::scaled(5.0, LossSpec::power(2.0)), kNarrow);
    FAIL("expected SameClass");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SameClass);
  }
  CHECK_THROWS_AS(refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(1.0),
                                          LossSpec::power(2.0), kNarrow),
                  Error);
}

TEST_CASE("wide interval: both objectives are stationary at gamma ~ 1") {
  const auto c = refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(2.0),
                                         LossSpec::power(4.0), kWide);
  CHECK((c.verdict == Verdict::StationaryBoth || c.verdict == Verdict::NoDescentInFamily));
  CHECK(c.delta_star_params[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK_FALSE(c.note.empty());
}

TEST_CASE("refutation is invariant under scaling loss_q") {
  const auto base = refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(2.0),
                                            LossSpec::power(4.0), kNarrow);
  const auto star = solve_minimax(kUnit, AffineMeanFamily{}, LossSpec::power(2.0), kNarrow);
  for (double lambda : {0.1, 10.0}) {
    const auto c = refute_at(kUnit, AffineMeanFamily{}, LossSpec::power(2.0),
                             scale_loss(LossSpec::power(4.0), lambda), kNarrow, star);
    CHECK(c.verdict == base.verdict);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(c.direction[i] - base.direction[i]) < 1e-3);
  }
}

TEST_CASE("sign perturbation") {
  SUBCASE("perturbed sup matches the closed form and a brute-force oracle") {
    const auto r = sign_perturbation_risk(kUnit, AffineMean{1.0, 0.0}, 0.1, 0.0,
                                          LossSpec::power(2.0), kNarrow, 1000000, 2);
    CHECK(std::abs(std::abs(r.perturbed.argmax_theta) - 3.0) < 0.05);
    const double se = r.perturbed.std_error;
    CHECK(se > 0.0);
    CHECK(std::abs(r.perturbed.sup_value - oracle::kSignPerturbedSupM3) < 4.0 * se);

    // Independent stream, theta = 3, theta_star = 0: error Z + 0.1 sgn(-3 - Z).
    const auto o = oracle::mc_mean(1000000, 77, [](oracle::NormalStream& z) {
      const double e = z.next();
      const double pert = e + 0.1 * ((-3.0 - e) > 0 ? 1.0 : -1.0);
      return pert * pert;
    });
    CHECK(std::abs(r.perturbed.sup_value - o.mean) < 4.0 * std::hypot(se, o.std_error));
  }
  SUBCASE("zero perturbation is the base rule") {
    const auto r = sign_perturbation_risk(kUnit, AffineMean{1.0, 0.0}, 0.0, 0.0,
                                          LossSpec::power(2.0), kNarrow, 20000, 2);
    CHECK(r.base.sup_value == r.perturbed.sup_value);
    CHECK(r.base.argmax_theta == r.perturbed.argmax_theta);
  }
  SUBCASE("pointwise risk drops at theta_star") {
    const SignPerturbed est{AffineMean{1.0, 0.0}, 0.1, 3.0};
    const auto base = risk(kUnit, AffineMean{1.0, 0.0}, LossSpec::power(2.0), 3.0,
                           MonteCarlo{1000000, 5});
    const auto pert = risk(kUnit, est, LossSpec::power(2.0), 3.0, MonteCarlo{1000000, 5});
    CHECK(pert.value < base.value);
    CHECK(std::abs(pert.value - oracle::kSignPerturbedAtStar) < 4.0 * pert.std_error);
  }
  SUBCASE("negative epsilon") {
    CHECK_THROWS_AS(sign_perturbation_risk(kUnit, AffineMean{}, -0.1, 0.0, LossSpec::power(2.0),
                                           kNarrow, 20000, 2),
                    Error);
  }
}

TEST_CASE("appendix f") {
  CHECK(appendix_f(0.0, 1, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(appendix_f(0.5, 1, 2.0) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(appendix_f(0.0, 4, 2.0) == doctest::Approx(0.25).epsilon(1e-12));
  for (double q : {1.5, 2.2, 3.0}) {
    CHECK(appendix_f(0.0, 1, q) == doctest::Approx(oracle::abs_normal_moment(q)).epsilon(1e-8));
  }
}

TEST_CASE("appendix f is even and convex") {
  for (double q : {1.5, 2.0, 2.2, 3.0, 4.5}) {
    for (int i = 1; i <= 10; ++i) {
      const double a = 0.1 * i;
      CHECK(std::abs(appendix_f(a, 1, q) - appendix_f(-a, 1, q)) < 1e-8);
    }
    const double h = 0.05;
    for (int i = -39; i <= 39; ++i) {
      const double a = 0.05 * i;
      const double second = appendix_f(a + h, 1, q) - 2.0 * appendix_f(a, 1, q) + appendix_f(a - h, 1, q);
      CHECK(second >= -1e-8);
    }
  }
}

TEST_CASE("appendix f'") {
  for (double q : {1.5, 2.0, 2.2, 2.5, 3.0}) {
    CHECK(std::abs(appendix_fprime(0.0, 1, q, FPrimeMode::Analytic)) < 1e-8);
    CHECK(std::abs(appendix_fprime(0.0, 1, q, FPrimeMode::FiniteDifference)) < 1e-8);
    for (double a : {0.1, 0.3, 0.5, 1.0}) {
      const double an = appendix_fprime(a, 1, q, FPrimeMode::Analytic);
      const double fd = appendix_fprime(a, 1, q, FPrimeMode::FiniteDifference);
      CHECK(std::abs(an - fd) < 1e-5);
      // The computed sign: f is minimized at 0, so f' > 0 to the right.
      CHECK(an > 0.0);
    }
  }
  for (double a : {0.1, 0.25, 0.5, 1.0}) {
    CHECK(std::abs(appendix_fprime(a, 1, 2.0, FPrimeMode::Analytic) - 2.0 * a) < 1e-6);
    CHECK(std::abs(appendix_fprime(a, 3, 2.0, FPrimeMode::Analytic) - 2.0 * a) < 1e-6);
  }
  CHECK(appendix_fprime(0.5, 1, 2.0, FPrimeMode::Analytic) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exclusivity partition check") {
  SUBCASE("bounded interval separates the classes") {
    const auto rep = exclusivity_partition_check(kUnit, AffineMeanFamily{}, {2.0, 4.0}, kNarrow);
    CHECK(rep.pairwise_disjoint);
    REQUIRE(rep.classes.size() == 2);
    CHECK(rep.classes[0].params[0] == doctest::Approx(0.9).epsilon(0.005));
    CHECK(rep.classes[1].params[0] == doctest::Approx(oracle::kL4MinimaxGammaM3).epsilon(1e-4));
    CHECK(rep.witnesses.size() == 2);
    for (const auto& w : rep.witnesses) CHECK(w.verdict == Verdict::Refuted);
  }
  SUBCASE("wide interval does not") {
    const auto rep = exclusivity_partition_check(kUnit, AffineMeanFamily{}, {2.0, 4.0}, kWide);
    CHECK_FALSE(rep.pairwise_disjoint);
    for (const auto& w : rep.witnesses) CHECK(w.verdict == Verdict::StationaryBoth);
  }
  SUBCASE("preconditions") {
    try {
      exclusivity_partition_check(kUnit, AffineMeanFamily{}, {2.0}, kNarrow);
      FAIL("expected InsufficientClasses");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientClasses);
    }
    CHECK_THROWS_AS(exclusivity_partition_check(kUnit, AffineMeanFamily{}, {2.0, 2.0}, kNarrow),
                    Error);
    CHECK_THROWS_AS(exclusivity_partition_check(kUnit, AffineMeanFamily{}, {1.0, 2.0}, kNarrow),
                    Error);
  }
}

TEST_CASE("certificate JSON shape") {
  const auto c = refute_joint_minimaxity(kUnit, AffineMeanFamily{}, LossSpec::power(2.0),
                                         LossSpec::power(4.0), kNarrow);
  const auto doc = document("refutation", to_json(c));
  CHECK(doc["schema"] == kJsonSchema);
  CHECK(doc["kind"] == "refutation");
  for (const char* key : {"p", "q", "delta_star_params", "gradient_q", "gradient_p_norm",
                          "direction", "alpha", "delta_Rq", "delta_Rp", "taylor_slope_p",
                          "verdict", "ladder"}) {
    CHECK_MESSAGE(doc.contains(key), key);
  }
  CHECK(doc["verdict"] == "Refuted");
  CHECK(doc["delta_star_params"].contains("gamma"));
  CHECK(doc["ladder"].size() == 9);

  const auto star = solve_minimax(kUnit, AffineMeanFamily{}, LossSpec::power(2.0), kNarrow);
  const auto m = to_json(star);
  CHECK(m["scope"] == "family-relative");
  CHECK(m["best_params"]["gamma"].get<double>() == star.best_params[0]);
}
