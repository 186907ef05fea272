#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "minmaxlab/optimize.hpp"
#include "minmaxlab/risk.hpp"

namespace minmaxlab {

/// Parameters (gamma, beta) of delta = gamma * mean(X) + beta.
struct AffineMeanFamily {
  Interval gamma_range{0.0, 1.5};
  Interval beta_range{-1.0, 1.0};
};

/// Parameter (beta) of delta = median(X) + beta.
struct MedianShiftFamily {
  Interval beta_range{-1.0, 1.0};
};

using FamilySpec = std::variant<AffineMeanFamily, MedianShiftFamily>;

std::size_t param_count(const FamilySpec& family);
std::vector<std::string> param_names(const FamilySpec& family);
std::vector<Interval> param_box(const FamilySpec& family);
EstimatorSpec estimator_at(const FamilySpec& family, const std::vector<double>& params);

/// sup over theta of the risk of the family member at `params`.
double worst_case_value(const GaussianLocationModel& model, const FamilySpec& family,
                        const std::vector<double>& params, const LossSpec& loss,
                        const Interval& theta_interval, const WorstCaseOptions& inner = {});

struct MinimaxOptions {
  int restarts = 5;
  std::uint64_t seed = 0;
  WorstCaseOptions inner;
  NelderMeadOptions simplex;
  /// Convergence: final simplex size below step_tol and the two best
  /// restarts within agreement_tol (relative) of each other.
  double step_tol = 1e-5;
  double agreement_tol = 1e-4;
};

/// Family-relative minimax point: the smallest worst-case risk over the
/// family's parameter box, not a claim about all estimators.
struct MinimaxResult {
  std::vector<double> best_params;
  std::vector<std::string> param_names;
  double minimax_value = 0.0;  // recomputed worst-case risk at best_params
  WorstCaseResult inner;
  int outer_iterations = 0;
  bool converged = false;
  double final_step = 0.0;
  double restart_spread = 0.0;
  std::vector<double> restart_values;
};

/// inf over the family of sup over theta. Nelder-Mead from seeded random
/// starts in the box; restarts may run concurrently and the smallest value
/// wins, ties broken lexicographically on the parameters. A non-converged
/// result is still returned with converged = false.
MinimaxResult solve_minimax(const GaussianLocationModel& model, const FamilySpec& family,
                            const LossSpec& loss, const Interval& theta_interval,
                            const MinimaxOptions& opts = {});

struct RealizabilityReport {
  std::vector<MinimaxResult> rows;
  /// Euclidean distances between the optimal parameter vectors.
  std::vector<std::vector<double>> distances;
};

RealizabilityReport realizability_report(const GaussianLocationModel& model,
                                         const FamilySpec& family,
                                         const std::vector<LossSpec>& losses,
                                         const Interval& theta_interval,
                                         const MinimaxOptions& opts = {});

}  // namespace minmaxlab
