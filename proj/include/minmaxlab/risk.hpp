#pragma once

#include <cstdint>
#include <variant>

#include "minmaxlab/loss.hpp"
#include "minmaxlab/model.hpp"
#include "minmaxlab/quadrature.hpp"

namespace minmaxlab {

struct Quadrature {
  int nodes = kDefaultQuadratureNodes;
};

struct MonteCarlo {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

using RiskMethod = std::variant<Quadrature, MonteCarlo>;

/// R_L(theta, delta) = E_theta[L(theta, delta(X))].
struct RiskEstimate {
  double value = 0.0;
  RiskMethod method = Quadrature{};
  double std_error = 0.0;  // zero for quadrature
};

RiskEstimate risk(const GaussianLocationModel& model, const EstimatorSpec& est,
                  const LossSpec& loss, double theta, const RiskMethod& method = Quadrature{});

/// Expected loss of the error law mu + s Z, by split quadrature.
double gaussian_error_risk(const LossSpec& loss, double mu, double s,
                           int nodes = kDefaultQuadratureNodes);

struct RiskCrossCheck {
  RiskEstimate quad;
  RiskEstimate mc;
  double z_score = 0.0;  // |quad - mc| / mc.std_error; 0 when both are exact and equal
};

RiskCrossCheck crosscheck_risk(const GaussianLocationModel& model, const EstimatorSpec& est,
                               const LossSpec& loss, double theta, std::size_t mc_samples,
                               std::uint64_t seed);

enum class RiskEvaluation { Auto, MonteCarlo };

struct WorstCaseOptions {
  int grid = 256;
  double refine_tol = 1e-6;
  int nodes = kDefaultQuadratureNodes;
  /// Used for estimators without an exact Gaussian error law, or when forced.
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
  RiskEvaluation evaluation = RiskEvaluation::Auto;
};

struct WorstCaseResult {
  double sup_value = 0.0;
  double argmax_theta = 0.0;
  int grid_points = 0;
  double refinement_tol = 0.0;
  /// The risk does not depend on theta; every point of the interval attains the sup.
  bool constant_in_theta = false;
  /// Monte Carlo standard error at the argmax; zero for quadrature.
  double std_error = 0.0;
};

/// sup over the interval: even grid scan, then golden-section refinement
/// around the best grid point. Monte Carlo curves reuse one set of draws
/// across theta (common random numbers).
WorstCaseResult worst_case_risk(const GaussianLocationModel& model, const EstimatorSpec& est,
                                const LossSpec& loss, const Interval& theta_interval,
                                const WorstCaseOptions& opts = {});

}  // namespace minmaxlab
