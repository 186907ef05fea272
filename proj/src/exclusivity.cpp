#include "minmaxlab/exclusivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "minmaxlab/parallel.hpp"

namespace minmaxlab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Refuted: return "Refuted";
    case Verdict::NoDescentInFamily: return "NoDescentInFamily";
    case Verdict::StationaryBoth: return "StationaryBoth";
  }
  return "Unknown";
}

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> fd_gradient(const GaussianLocationModel& model, const FamilySpec& family,
                                const std::vector<double>& params, const LossSpec& loss,
                                const Interval& theta_interval, double h,
                                const WorstCaseOptions& inner) {
  std::vector<double> g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto up = params, down = params;
    up[i] += h;
    down[i] -= h;
    g[i] = (worst_case_value(model, family, up, loss, theta_interval, inner) -
            worst_case_value(model, family, down, loss, theta_interval, inner)) /
           (2.0 * h);
  }
  return g;
}

std::pair<double, double> class_exponents(const LossSpec& loss_p, const LossSpec& loss_q,
                                          double gap) {
  const double p = classify_exponent(loss_p).p_hat;
  const double q = classify_exponent(loss_q).p_hat;
  require(p > 1.0 && q > 1.0, ErrorKind::InvalidArgument,
          fmt::format("refutation needs exponents above 1, got p = {}, q = {}", p, q));
  require(std::abs(p - q) > gap, ErrorKind::SameClass,
          fmt::format("exponents {} and {} are in the same power class", p, q));
  return {p, q};
}

// Least-squares slope of log|y| on log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(std::abs(y[i]));
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(y[i])) - my);
  }
  return sxy / sxx;
}

}  // namespace

std::vector<double> grad_worst_case(const GaussianLocationModel& model, const FamilySpec& family,
                                    const std::vector<double>& params, const LossSpec& loss,
                                    const Interval& theta_interval, double h,
                                    const WorstCaseOptions& inner) {
  require(h > 0.0, ErrorKind::InvalidArgument, "finite-difference step must be > 0");
  const auto box = param_box(family);
  require(params.size() == box.size(), ErrorKind::InvalidArgument,
          "parameter vector does not match the family");
  for (std::size_t i = 0; i < box.size(); ++i) {
    require(params[i] > box[i].lo && params[i] < box[i].hi, ErrorKind::InvalidArgument,
            fmt::format("parameter {} = {} is not interior to [{}, {}]", i, params[i], box[i].lo,
                        box[i].hi));
  }
  return fd_gradient(model, family, params, loss, theta_interval, h, inner);
}

RefutationCertificate refute_at(const GaussianLocationModel& model, const FamilySpec& family,
                                const LossSpec& loss_p, const LossSpec& loss_q,
                                const Interval& theta_interval, const MinimaxResult& star,
                                const RefuteOptions& opts) {
  const auto [p, q] = class_exponents(loss_p, loss_q, opts.exponent_gap);
  require(opts.alpha0 > 0.0 && opts.halvings >= 0 && opts.taylor_points >= 2,
          ErrorKind::InvalidArgument, "invalid step ladder");

  const auto& inner = opts.minimax.inner;
  auto Rp = [&](const std::vector<double>& x) {
    return worst_case_value(model, family, x, loss_p, theta_interval, inner);
  };
  auto Rq = [&](const std::vector<double>& x) {
    return worst_case_value(model, family, x, loss_q, theta_interval, inner);
  };

  RefutationCertificate cert;
  cert.p = p;
  cert.q = q;
  cert.delta_star_params = star.best_params;
  cert.param_names = param_names(family);
  cert.delta_star_converged = star.converged;
  const auto& x0 = star.best_params;
  cert.Rp_star = Rp(x0);
  cert.Rq_star = Rq(x0);

  const auto gp = fd_gradient(model, family, x0, loss_p, theta_interval, opts.fd_step, inner);
  cert.gradient_p_norm = norm(gp);
  cert.gradient_q = fd_gradient(model, family, x0, loss_q, theta_interval, opts.fd_step, inner);
  const double gq_norm = norm(cert.gradient_q);
  const bool p_stationary =
      cert.gradient_p_norm < opts.stationarity_tol * std::max(std::abs(cert.Rp_star), 1e-300);

  if (gq_norm < opts.stationarity_tol * std::max(std::abs(cert.Rq_star), 1e-300)) {
    cert.verdict = Verdict::StationaryBoth;
    cert.taylor_slope_p = std::numeric_limits<double>::quiet_NaN();
    cert.note = p_stationary ? "loss-q worst-case risk is stationary at the loss-p minimax point"
                             : "loss-q gradient vanishes but the loss-p gradient does not; the "
                               "loss-p minimax point may be inaccurate";
    return cert;
  }

  cert.direction.resize(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) cert.direction[i] = -cert.gradient_q[i] / gq_norm;

  double alpha = opts.alpha0;
  for (int k = 0; k <= opts.halvings; ++k, alpha *= 0.5) {
    auto x = x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * cert.direction[i];
    cert.ladder.push_back({alpha, Rp(x) - cert.Rp_star, Rq(x) - cert.Rq_star});
  }

  const auto first = std::find_if(cert.ladder.begin(), cert.ladder.end(),
                                  [](const LadderStep& s) { return s.delta_Rq < 0.0; });
  if (first == cert.ladder.end()) {
    cert.verdict = Verdict::NoDescentInFamily;
    cert.taylor_slope_p = std::numeric_limits<double>::quiet_NaN();
    cert.note = "no ladder step decreased the loss-q worst-case risk";
    return cert;
  }
  cert.alpha = first->alpha;
  cert.delta_Rq = first->delta_Rq;
  cert.delta_Rp = first->delta_Rp;

  // Smallest successful steps, skipping exact zeros that carry no slope information.
  std::vector<double> xs, ys;
  for (auto it = cert.ladder.rbegin(); it != cert.ladder.rend(); ++it) {
    if (static_cast<int>(xs.size()) == opts.taylor_points) break;
    if (it->delta_Rq < 0.0 && it->delta_Rp != 0.0) {
      xs.push_back(it->alpha);
      ys.push_back(it->delta_Rp);
    }
  }
  if (xs.size() < 2) {
    cert.verdict = Verdict::NoDescentInFamily;
    cert.taylor_slope_p = std::numeric_limits<double>::quiet_NaN();
    cert.note = "too few successful steps to fit the loss-p Taylor exponent";
    return cert;
  }
  cert.taylor_slope_p = log_log_slope(xs, ys);
  if (cert.taylor_slope_p >= opts.slope_lo && cert.taylor_slope_p <= opts.slope_hi) {
    cert.verdict = Verdict::Refuted;
    cert.note = "loss-q descent with second-order loss-p change";
  } else {
    cert.verdict = Verdict::NoDescentInFamily;
    cert.note = fmt::format(
        "loss-q descent exists but loss-p change scales like alpha^{:.3f}, not alpha^2",
        cert.taylor_slope_p);
  }
  if (!p_stationary) cert.note += "; loss-p gradient above stationarity tolerance";
  return cert;
}

RefutationCertificate refute_joint_minimaxity(const GaussianLocationModel& model,
                                              const FamilySpec& family, const LossSpec& loss_p,
                                              const LossSpec& loss_q,
                                              const Interval& theta_interval,
                                              const RefuteOptions& opts) {
  // Check the class precondition before paying for the minimax solve.
  class_exponents(loss_p, loss_q, opts.exponent_gap);
  const auto star = solve_minimax(model, family, loss_p, theta_interval, opts.minimax);
  return refute_at(model, family, loss_p, loss_q, theta_interval, star, opts);
}

SignPerturbationResult sign_perturbation_risk(const GaussianLocationModel& model,
                                              const BaseEstimator& base, double epsilon,
                                              double theta_star, const LossSpec& loss,
                                              const Interval& theta_interval,
                                              std::size_t mc_samples, std::uint64_t seed,
                                              WorstCaseOptions opts) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorKind::InvalidArgument,
          "perturbation size must be >= 0");
  opts.evaluation = RiskEvaluation::MonteCarlo;
  opts.mc_samples = mc_samples;
  opts.seed = seed;
  const EstimatorSpec base_est =
      std::visit([](const auto& b) -> EstimatorSpec { return b; }, base);

  SignPerturbationResult out;
  out.base = worst_case_risk(model, base_est, loss, theta_interval, opts);
  if (epsilon == 0.0) {
    out.perturbed = out.base;
  } else {
    out.perturbed =
        worst_case_risk(model, SignPerturbed{base, epsilon, theta_star}, loss, theta_interval, opts);
  }
  return out;
}

double appendix_f(double alpha, int n, double q, int nodes) {
  require(q > 1.0, ErrorKind::InvalidArgument, "appendix_f needs q > 1");
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  return gaussian_error_risk(LossSpec::power(q, 1.0), -alpha, 1.0 / std::sqrt(double(n)), nodes);
}

double appendix_fprime(double alpha, int n, double q, FPrimeMode mode, int nodes) {
  require(q > 1.0, ErrorKind::InvalidArgument, "appendix_fprime needs q > 1");
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  if (mode == FPrimeMode::FiniteDifference) {
    const double h = kAppendixFdStep;
    return (appendix_f(alpha + h, n, q, nodes) - appendix_f(alpha - h, n, q, nodes)) / (2.0 * h);
  }
  const double breaks[] = {0.0};
  const double expectation = normal_expectation(
      [q](double x) { return x == 0.0 ? 0.0 : x * std::pow(std::abs(x), q - 2.0); }, -alpha,
      1.0 / std::sqrt(double(n)), breaks, nodes);
  return -q * expectation;
}

PartitionReport exclusivity_partition_check(const GaussianLocationModel& model,
                                            const FamilySpec& family,
                                            const std::vector<double>& exponents,
                                            const Interval& theta_interval,
                                            const RefuteOptions& opts) {
  require(exponents.size() >= 2, ErrorKind::InsufficientClasses,
          "a partition check needs at least two exponents");
  std::set<double> seen;
  for (double p : exponents) {
    require(p > 1.0, ErrorKind::InvalidArgument, fmt::format("exponent {} is not above 1", p));
    require(seen.insert(p).second, ErrorKind::InvalidArgument,
            fmt::format("exponent {} listed twice", p));
  }

  std::vector<LossSpec> losses;
  for (double p : exponents) losses.push_back(LossSpec::power(p, 1.0));
  const auto table = realizability_report(model, family, losses, theta_interval, opts.minimax);

  PartitionReport report;
  report.param_names = param_names(family);
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const auto& row = table.rows[i];
    report.classes.push_back({exponents[i], row.best_params, row.minimax_value, row.converged});
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    for (std::size_t j = 0; j < exponents.size(); ++j)
      if (i != j) pairs.emplace_back(i, j);
  report.witnesses = parallel_map(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    return refute_at(model, family, losses[i], losses[j], theta_interval, table.rows[i], opts);
  });
  report.pairwise_disjoint =
      std::all_of(report.witnesses.begin(), report.witnesses.end(),
                  [](const RefutationCertificate& c) { return c.verdict == Verdict::Refuted; });
  return report;
}

}  // namespace minmaxlab
