#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "minmaxlab/minimax.hpp"

namespace minmaxlab {

/// Central finite-difference gradient of the worst-case risk over the family
/// parameters: component i is [R(x + h e_i) - R(x - h e_i)] / (2h).
/// Requires params strictly inside the family box.
std::vector<double> grad_worst_case(const GaussianLocationModel& model, const FamilySpec& family,
                                    const std::vector<double>& params, const LossSpec& loss,
                                    const Interval& theta_interval, double h = 1e-4,
                                    const WorstCaseOptions& inner = {});

enum class Verdict { Refuted, NoDescentInFamily, StationaryBoth };
std::string_view to_string(Verdict v);

struct LadderStep {
  double alpha = 0.0;
  double delta_Rp = 0.0;
  double delta_Rq = 0.0;
};

/// Outcome of perturbing the loss-p minimax point along the steepest descent
/// direction of the loss-q worst-case risk.
struct RefutationCertificate {
  double p = 0.0;  // classified exponents
  double q = 0.0;
  std::vector<double> delta_star_params;
  std::vector<std::string> param_names;
  bool delta_star_converged = false;
  double Rp_star = 0.0;
  double Rq_star = 0.0;
  std::vector<double> gradient_q;
  double gradient_p_norm = 0.0;
  std::vector<double> direction;  // -g / |g|; empty when g vanishes
  double alpha = 0.0;             // largest ladder step with a loss-q decrease
  double delta_Rq = 0.0;
  double delta_Rp = 0.0;
  double taylor_slope_p = 0.0;  // fitted exponent of |delta_Rp| against alpha
  Verdict verdict = Verdict::NoDescentInFamily;
  std::vector<LadderStep> ladder;
  std::string note;
};

struct RefuteOptions {
  MinimaxOptions minimax;
  double fd_step = 1e-4;
  /// |grad R| below this times the worst-case value counts as stationary.
  double stationarity_tol = 1e-2;
  double alpha0 = 0.1;
  int halvings = 8;
  int taylor_points = 4;
  double slope_lo = 1.7;
  double slope_hi = 2.3;
  /// Minimum gap between classified exponents.
  double exponent_gap = 0.05;
};

RefutationCertificate refute_joint_minimaxity(const GaussianLocationModel& model,
                                              const FamilySpec& family, const LossSpec& loss_p,
                                              const LossSpec& loss_q,
                                              const Interval& theta_interval,
                                              const RefuteOptions& opts = {});

/// Same, reusing an already solved loss-p minimax point.
RefutationCertificate refute_at(const GaussianLocationModel& model, const FamilySpec& family,
                                const LossSpec& loss_p, const LossSpec& loss_q,
                                const Interval& theta_interval, const MinimaxResult& star,
                                const RefuteOptions& opts = {});

struct SignPerturbationResult {
  WorstCaseResult base;
  WorstCaseResult perturbed;
};

/// Worst-case Monte Carlo risk of base(X) and of base(X) + eps * sgn(theta_star - base(X)),
/// on common random numbers. epsilon == 0 returns the base result twice.
SignPerturbationResult sign_perturbation_risk(const GaussianLocationModel& model,
                                              const BaseEstimator& base, double epsilon,
                                              double theta_star, const LossSpec& loss,
                                              const Interval& theta_interval,
                                              std::size_t mc_samples, std::uint64_t seed,
                                              WorstCaseOptions opts = {});

/// f(alpha) = E|Z/sqrt(n) - alpha|^q.
double appendix_f(double alpha, int n, double q, int nodes = kDefaultQuadratureNodes);

enum class FPrimeMode { Analytic, FiniteDifference };

inline constexpr double kAppendixFdStep = 1e-5;

/// Analytic: -q E[(W - alpha)|W - alpha|^(q-2)], W = Z/sqrt(n).
/// FiniteDifference: central difference of appendix_f with step 1e-5.
double appendix_fprime(double alpha, int n, double q, FPrimeMode mode,
                       int nodes = kDefaultQuadratureNodes);

struct PartitionClass {
  double exponent = 0.0;
  std::vector<double> params;
  double value = 0.0;
  bool converged = false;
};

struct PartitionReport {
  std::vector<PartitionClass> classes;
  std::vector<std::string> param_names;
  /// Every ordered cross-class certificate came back Refuted.
  bool pairwise_disjoint = false;
  std::vector<RefutationCertificate> witnesses;
};

/// Minimax points for canonical losses |t|^p, then a refutation attempt for
/// every ordered pair of distinct exponents.
PartitionReport exclusivity_partition_check(const GaussianLocationModel& model,
                                            const FamilySpec& family,
                                            const std::vector<double>& exponents,
                                            const Interval& theta_interval,
                                            const RefuteOptions& opts = {});

}  // namespace minmaxlab
