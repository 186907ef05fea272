#include "minmaxlab/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "minmaxlab/parallel.hpp"

namespace minmaxlab {

std::size_t param_count(const FamilySpec& family) {
  return std::holds_alternative<AffineMeanFamily>(family) ? 2 : 1;
}

std::vector<std::string> param_names(const FamilySpec& family) {
  if (std::holds_alternative<AffineMeanFamily>(family)) return {"gamma", "beta"};
  return {"beta"};
}

std::vector<Interval> param_box(const FamilySpec& family) {
  if (const auto* a = std::get_if<AffineMeanFamily>(&family)) return {a->gamma_range, a->beta_range};
  return {std::get<MedianShiftFamily>(family).beta_range};
}

EstimatorSpec estimator_at(const FamilySpec& family, const std::vector<double>& params) {
  require(params.size() == param_count(family), ErrorKind::InvalidArgument,
          "parameter vector does not match the family");
  if (std::holds_alternative<AffineMeanFamily>(family)) return AffineMean{params[0], params[1]};
  return SampleMedian{params[0]};
}

double worst_case_value(const GaussianLocationModel& model, const FamilySpec& family,
                        const std::vector<double>& params, const LossSpec& loss,
                        const Interval& theta_interval, const WorstCaseOptions& inner) {
  return worst_case_risk(model, estimator_at(family, params), loss, theta_interval, inner)
      .sup_value;
}

namespace {

struct RestartOutcome {
  std::vector<double> params;
  double value = 0.0;
  int iterations = 0;
  double step = 0.0;
};

bool better(const RestartOutcome& a, const RestartOutcome& b) {
  if (a.value != b.value) return a.value < b.value;
  return std::lexicographical_compare(a.params.begin(), a.params.end(), b.params.begin(),
                                      b.params.end());
}

}  // namespace

MinimaxResult solve_minimax(const GaussianLocationModel& model, const FamilySpec& family,
                            const LossSpec& loss, const Interval& theta_interval,
                            const MinimaxOptions& opts) {
  require(opts.restarts >= 1, ErrorKind::InvalidArgument, "need at least one restart");
  const auto box = param_box(family);
  const std::size_t dim = box.size();

  auto clamp = [&](const std::vector<double>& x) {
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) y[i] = box[i].clamp(x[i]);
    return y;
  };
  // Outside the box: value at the projection plus a penalty growing with distance.
  auto objective = [&](const std::vector<double>& x) {
    const auto y = clamp(x);
    double dist = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dist += (x[i] - y[i]) * (x[i] - y[i]);
    const double v = worst_case_value(model, family, y, loss, theta_interval, opts.inner);
    return v + (1.0 + std::abs(v)) * std::sqrt(dist);
  };

  const auto outcomes = parallel_map(static_cast<std::size_t>(opts.restarts), [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(opts.seed, r));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> start(dim), steps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      start[i] = box[i].lo + unit(rng) * box[i].width();
      steps[i] = 0.1 * box[i].width();
      if (start[i] + steps[i] > box[i].hi) steps[i] = -steps[i];
    }
    const auto nm = nelder_mead(objective, start, steps, opts.simplex);
    return RestartOutcome{clamp(nm.x), nm.value, nm.iterations, nm.simplex_size};
  });

  std::vector<std::size_t> order(outcomes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return better(outcomes[a], outcomes[b]); });
  const auto& best = outcomes[order.front()];

  MinimaxResult out;
  out.best_params = best.params;
  out.param_names = param_names(family);
  out.inner = worst_case_risk(model, estimator_at(family, best.params), loss, theta_interval,
                              opts.inner);
  out.minimax_value = out.inner.sup_value;
  out.outer_iterations = best.iterations;
  out.final_step = best.step;
  for (const auto& o : outcomes) out.restart_values.push_back(o.value);
  if (order.size() >= 2) {
    const double v0 = outcomes[order[0]].value;
    const double v1 = outcomes[order[1]].value;
    out.restart_spread = std::abs(v1 - v0) / std::max(1.0, std::abs(v0));
  }
  out.converged = out.final_step < opts.step_tol && out.restart_spread < opts.agreement_tol;
  return out;
}

RealizabilityReport realizability_report(const GaussianLocationModel& model,
                                         const FamilySpec& family,
                                         const std::vector<LossSpec>& losses,
                                         const Interval& theta_interval,
                                         const MinimaxOptions& opts) {
  require(losses.size() >= 2, ErrorKind::InsufficientLosses,
          "a realizability report compares at least two losses");
  RealizabilityReport report;
  for (const auto& loss : losses) {
    report.rows.push_back(solve_minimax(model, family, loss, theta_interval, opts));
  }
  const std::size_t k = report.rows.size();
  report.distances.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < report.rows[i].best_params.size(); ++c) {
        const double diff = report.rows[i].best_params[c] - report.rows[j].best_params[c];
        d += diff * diff;
      }
      report.distances[i][j] = std::sqrt(d);
    }
  }
  return report;
}

}  // namespace minmaxlab
