#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "minmaxlab/error.hpp"

namespace minmaxlab {

/// Closed parameter interval. A wide finite interval stands in for an
/// unbounded parameter space.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_);

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

inline Interval default_theta_interval() { return {-50.0, 50.0}; }

/// X_1..X_n iid Normal(theta, sigma^2), sigma known.
struct GaussianLocationModel {
  int n = 1;
  double sigma = 1.0;

  GaussianLocationModel(int n_, double sigma_);

  /// Standard deviation of the sample mean.
  double mean_sd() const;
};

// Estimator specs are plain data; none of them can see the true theta.

/// delta = gamma * mean(X) + beta
struct AffineMean {
  double gamma = 1.0;
  double beta = 0.0;
};

/// delta = median(X) + beta (midpoint of the two middle order statistics for even n)
struct SampleMedian {
  double beta = 0.0;
};

using BaseEstimator = std::variant<AffineMean, SampleMedian>;

/// delta(X) = base(X) + epsilon * sgn(theta_star - base(X)). The base cannot
/// itself be perturbed, so nesting depth is one by construction.
struct SignPerturbed {
  BaseEstimator base;
  double epsilon = 0.0;
  double theta_star = 0.0;
};

using EstimatorSpec = std::variant<AffineMean, SampleMedian, SignPerturbed>;

void validate(const EstimatorSpec& est);
std::string describe(const EstimatorSpec& est);

/// Law of delta(X) - theta is mu + s * Z with Z standard normal.
struct AffineGaussian {
  double mu = 0.0;
  double s = 0.0;
};

struct Empirical {
  std::vector<double> samples;
  std::uint64_t seed = 0;
};

using ErrorLaw = std::variant<AffineGaussian, Empirical>;

struct McOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinEmpiricalSamples = 10000;

/// Exact Gaussian law for affine rules, seeded simulation otherwise.
ErrorLaw error_law(const GaussianLocationModel& model, const EstimatorSpec& est, double theta,
                   const McOptions& mc = {});

/// `count` draws of delta(X) under P_theta. Bit-identical for equal seeds.
std::vector<double> simulate_estimates(const GaussianLocationModel& model,
                                       const EstimatorSpec& est, double theta, std::size_t count,
                                       std::uint64_t seed);

/// Counter-based seed splitting: splitmix64(master + (counter + 1) * 0x9E3779B97F4A7C15).
/// Distinct counters give statistically independent mt19937_64 streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

/// Draws the theta-free noise of an estimator once and maps it to errors or
/// estimates at any theta. Reusing one sampler across a theta grid gives
/// common random numbers, so Monte Carlo risk curves are smooth in theta.
class ErrorSampler {
public:
  ErrorSampler(const GaussianLocationModel& model, const EstimatorSpec& est, std::size_t count,
               std::uint64_t seed);

  std::size_t size() const { return noise_.size(); }
  std::uint64_t seed() const { return seed_; }

  std::vector<double> errors_at(double theta) const;
  std::vector<double> estimates_at(double theta) const;

  /// Calls fn(error) for every draw without materializing the vector.
  template <typename Fn>
  void for_each_error(double theta, Fn&& fn) const {
    for (double w : noise_) fn(error_from_noise(theta, w));
  }

private:
  double base_error(double theta, double w) const;
  double error_from_noise(double theta, double w) const;

  GaussianLocationModel model_;
  EstimatorSpec est_;
  BaseEstimator base_;
  double epsilon_ = 0.0;
  double theta_star_ = 0.0;
  bool perturbed_ = false;
  std::uint64_t seed_;
  // Affine: standard normal Z. Median: sigma * median of n standard normals.
  std::vector<double> noise_;
};

/// True when delta(X) - theta has a theta-free law.
bool is_location_equivariant(const EstimatorSpec& est);

}  // namespace minmaxlab
