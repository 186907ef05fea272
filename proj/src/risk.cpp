#include "minmaxlab/risk.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include <fmt/format.h>

#include "minmaxlab/optimize.hpp"
#include "minmaxlab/parallel.hpp"

namespace minmaxlab {

namespace {

constexpr double kTieTol = 1e-12;

struct Moment {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean loss and its standard error over one set of draws.
Moment mc_moment(const ErrorSampler& sampler, const LossSpec& loss, double theta) {
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  sampler.for_each_error(theta, [&](double e) {
    const double x = eval_error(loss, e);
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  });
  const double var = k > 1 ? m2 / static_cast<double>(k - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(k))};
}

void check_finite(double value, double theta) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFiniteRisk, fmt::format("risk is not finite at theta = {}", theta));
  }
}

}  // namespace

double gaussian_error_risk(const LossSpec& loss, double mu, double s, int nodes) {
  // Scale factors come out of the integral, so risk(lambda L) is exactly lambda risk(L).
  if (const auto* sc = std::get_if<Scaled>(&loss.node())) {
    return sc->lambda * gaussian_error_risk(*sc->inner, mu, s, nodes);
  }
  std::vector<double> breaks;
  for (double k : kinks(loss)) {
    breaks.push_back(k);
    if (k > 0.0) breaks.push_back(-k);
  }
  return normal_expectation([&](double e) { return eval_error(loss, e); }, mu, s, breaks, nodes);
}

RiskEstimate risk(const GaussianLocationModel& model, const EstimatorSpec& est,
                  const LossSpec& loss, double theta, const RiskMethod& method) {
  validate(est);
  require(std::isfinite(theta), ErrorKind::InvalidArgument, "theta must be finite");
  if (const auto* q = std::get_if<Quadrature>(&method)) {
    const auto law = error_law(model, est, theta);
    const auto* g = std::get_if<AffineGaussian>(&law);
    if (!g) {
      throw Error(ErrorKind::QuadratureUnsupported,
                  fmt::format("{} has no Gaussian error law; use Monte Carlo", describe(est)));
    }
    const double value = gaussian_error_risk(loss, g->mu, g->s, q->nodes);
    check_finite(value, theta);
    return {value, method, 0.0};
  }
  const auto& mc = std::get<MonteCarlo>(method);
  require(mc.samples >= 2, ErrorKind::InvalidArgument, "Monte Carlo needs at least 2 samples");
  const ErrorSampler sampler(model, est, mc.samples, mc.seed);
  const Moment m = mc_moment(sampler, loss, theta);
  check_finite(m.mean, theta);
  return {m.mean, method, m.std_error};
}

RiskCrossCheck crosscheck_risk(const GaussianLocationModel& model, const EstimatorSpec& est,
                               const LossSpec& loss, double theta, std::size_t mc_samples,
                               std::uint64_t seed) {
  RiskCrossCheck out;
  out.quad = risk(model, est, loss, theta, Quadrature{});
  out.mc = risk(model, est, loss, theta, MonteCarlo{mc_samples, seed});
  const double diff = std::abs(out.quad.value - out.mc.value);
  if (out.mc.std_error > 0.0) {
    out.z_score = diff / out.mc.std_error;
  } else {
    out.z_score = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return out;
}

WorstCaseResult worst_case_risk(const GaussianLocationModel& model, const EstimatorSpec& est,
                                const LossSpec& loss, const Interval& theta_interval,
                                const WorstCaseOptions& opts) {
  validate(est);
  require(opts.grid >= 16, ErrorKind::InvalidArgument, "worst-case grid needs at least 16 points");
  require(opts.refine_tol > 0.0, ErrorKind::InvalidArgument, "refine_tol must be > 0");

  const bool quadrature =
      opts.evaluation == RiskEvaluation::Auto && std::holds_alternative<AffineMean>(est);

  std::function<Moment(double)> curve;
  if (quadrature) {
    const auto& a = std::get<AffineMean>(est);
    const double s = std::abs(a.gamma) * model.mean_sd();
    curve = [&, a, s](double theta) {
      return Moment{gaussian_error_risk(loss, (a.gamma - 1.0) * theta + a.beta, s, opts.nodes), 0.0};
    };
  } else {
    auto sampler = std::make_shared<const ErrorSampler>(model, est, opts.mc_samples, opts.seed);
    curve = [&loss, sampler](double theta) { return mc_moment(*sampler, loss, theta); };
  }

  WorstCaseResult out;
  out.refinement_tol = opts.refine_tol;

  if (is_location_equivariant(est)) {
    const Moment m = curve(theta_interval.lo);
    check_finite(m.mean, theta_interval.lo);
    out.sup_value = m.mean;
    out.argmax_theta = theta_interval.lo;
    out.grid_points = 1;
    out.constant_in_theta = true;
    out.std_error = m.std_error;
    return out;
  }

  const auto n = static_cast<std::size_t>(opts.grid);
  const double step = theta_interval.width() / static_cast<double>(n - 1);
  auto theta_at = [&](std::size_t i) {
    return i + 1 == n ? theta_interval.hi : theta_interval.lo + step * static_cast<double>(i);
  };
  const auto values = parallel_map(n, [&](std::size_t i) { return curve(theta_at(i)); });

  double grid_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    check_finite(values[i].mean, theta_at(i));
    grid_max = std::max(grid_max, values[i].mean);
  }
  // Symmetric risks tie at mirrored points up to rounding; the first grid
  // point within kTieTol of the max is the argmax, so it survives loss scaling.
  std::size_t best = 0;
  while (values[best].mean < grid_max - kTieTol * std::abs(grid_max)) ++best;
  out.grid_points = opts.grid;
  out.sup_value = grid_max;
  out.argmax_theta = theta_at(best);
  out.std_error = values[best].std_error;

  const double a = theta_at(best == 0 ? 0 : best - 1);
  const double b = theta_at(best + 1 == n ? n - 1 : best + 1);
  const auto refined = golden_section_maximize(
      [&](double theta) {
        const double v = curve(theta).mean;
        check_finite(v, theta);
        return v;
      },
      a, b, opts.refine_tol);
  if (refined.value > out.sup_value + kTieTol * std::abs(out.sup_value)) {
    out.sup_value = refined.value;
    out.argmax_theta = refined.x;
    out.std_error = curve(refined.x).std_error;
  }
  return out;
}

}  // namespace minmaxlab
