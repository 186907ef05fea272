#include "minmaxlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace minmaxlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OracleEstimator: return "OracleEstimator";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::DegenerateLoss: return "DegenerateLoss";
    case ErrorKind::QuadratureUnsupported: return "QuadratureUnsupported";
    case ErrorKind::NonFiniteRisk: return "NonFiniteRisk";
    case ErrorKind::InsufficientLosses: return "InsufficientLosses";
    case ErrorKind::InsufficientClasses: return "InsufficientClasses";
    case ErrorKind::SameClass: return "SameClass";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  require(std::isfinite(lo) && std::isfinite(hi), ErrorKind::InvalidArgument,
          "interval bounds must be finite");
  require(lo < hi, ErrorKind::InvalidArgument,
          fmt::format("interval requires lo < hi, got [{}, {}]", lo, hi));
}

GaussianLocationModel::GaussianLocationModel(int n_, double sigma_) : n(n_), sigma(sigma_) {
  require(n >= 1, ErrorKind::InvalidArgument, "sample size n must be >= 1");
  require(std::isfinite(sigma) && sigma > 0.0, ErrorKind::InvalidArgument, "sigma must be > 0");
}

double GaussianLocationModel::mean_sd() const { return sigma / std::sqrt(static_cast<double>(n)); }

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_base(const BaseEstimator& base) {
  std::visit(overloaded{
                 [](const AffineMean& a) {
                   require(std::isfinite(a.gamma) && std::isfinite(a.beta),
                           ErrorKind::InvalidArgument, "AffineMean parameters must be finite");
                 },
                 [](const SampleMedian& m) {
                   require(std::isfinite(m.beta), ErrorKind::InvalidArgument,
                           "SampleMedian shift must be finite");
                 },
             },
             base);
}

BaseEstimator base_of(const EstimatorSpec& est) {
  return std::visit(overloaded{
                        [](const AffineMean& a) -> BaseEstimator { return a; },
                        [](const SampleMedian& m) -> BaseEstimator { return m; },
                        [](const SignPerturbed& s) -> BaseEstimator { return s.base; },
                    },
                    est);
}

double median_in_place(std::vector<double>& xs) {
  const std::size_t n = xs.size();
  const std::size_t mid = n / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

void validate(const EstimatorSpec& est) {
  std::visit(overloaded{
                 [](const AffineMean& a) { validate_base(a); },
                 [](const SampleMedian& m) { validate_base(m); },
                 [](const SignPerturbed& s) {
                   validate_base(s.base);
                   require(std::isfinite(s.epsilon) && s.epsilon > 0.0,
                           ErrorKind::InvalidArgument, "SignPerturbed epsilon must be > 0");
                   require(std::isfinite(s.theta_star), ErrorKind::InvalidArgument,
                           "SignPerturbed theta_star must be finite");
                 },
             },
             est);
}

std::string describe(const EstimatorSpec& est) {
  auto base_str = [](const BaseEstimator& b) {
    return std::visit(overloaded{
                          [](const AffineMean& a) {
                            return fmt::format("AffineMean(gamma={}, beta={})", a.gamma, a.beta);
                          },
                          [](const SampleMedian& m) {
                            return fmt::format("SampleMedian(beta={})", m.beta);
                          },
                      },
                      b);
  };
  return std::visit(overloaded{
                        [&](const AffineMean& a) { return base_str(a); },
                        [&](const SampleMedian& m) { return base_str(m); },
                        [&](const SignPerturbed& s) {
                          return fmt::format("SignPerturbed({}, epsilon={}, theta_star={})",
                                             base_str(s.base), s.epsilon, s.theta_star);
                        },
                    },
                    est);
}

bool is_location_equivariant(const EstimatorSpec& est) {
  if (const auto* a = std::get_if<AffineMean>(&est)) return a->gamma == 1.0;
  return std::holds_alternative<SampleMedian>(est);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ErrorSampler::ErrorSampler(const GaussianLocationModel& model, const EstimatorSpec& est,
                           std::size_t count, std::uint64_t seed)
    : model_(model), est_(est), base_(base_of(est)), seed_(seed) {
  validate(est);
  require(count >= 1, ErrorKind::InvalidArgument, "sample count must be >= 1");
  if (const auto* s = std::get_if<SignPerturbed>(&est)) {
    perturbed_ = true;
    epsilon_ = s->epsilon;
    theta_star_ = s->theta_star;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  noise_.resize(count);
  if (std::holds_alternative<AffineMean>(base_)) {
    for (auto& z : noise_) z = normal(rng);
  } else {
    std::vector<double> xs(static_cast<std::size_t>(model.n));
    for (auto& w : noise_) {
      for (auto& x : xs) x = normal(rng);
      w = model.sigma * median_in_place(xs);
    }
  }
}

double ErrorSampler::base_error(double theta, double w) const {
  if (const auto* a = std::get_if<AffineMean>(&base_)) {
    return (a->gamma - 1.0) * theta + a->beta + a->gamma * model_.mean_sd() * w;
  }
  return w + std::get<SampleMedian>(base_).beta;
}

double ErrorSampler::error_from_noise(double theta, double w) const {
  const double e = base_error(theta, w);
  if (!perturbed_) return e;
  // base(X) = theta + e, so theta_star - base(X) = (theta_star - theta) - e.
  return e + epsilon_ * sgn((theta_star_ - theta) - e);
}

std::vector<double> ErrorSampler::errors_at(double theta) const {
  std::vector<double> out;
  out.reserve(noise_.size());
  for_each_error(theta, [&](double e) { out.push_back(e); });
  return out;
}

std::vector<double> ErrorSampler::estimates_at(double theta) const {
  std::vector<double> out;
  out.reserve(noise_.size());
  for (double w : noise_) {
    double base;
    if (const auto* a = std::get_if<AffineMean>(&base_)) {
      base = a->gamma * (theta + model_.mean_sd() * w) + a->beta;
    } else {
      base = theta + w + std::get<SampleMedian>(base_).beta;
    }
    if (perturbed_) base += epsilon_ * sgn(theta_star_ - base);
    out.push_back(base);
  }
  return out;
}

ErrorLaw error_law(const GaussianLocationModel& model, const EstimatorSpec& est, double theta,
                   const McOptions& mc) {
  validate(est);
  if (const auto* a = std::get_if<AffineMean>(&est)) {
    return AffineGaussian{(a->gamma - 1.0) * theta + a->beta, std::abs(a->gamma) * model.mean_sd()};
  }
  require(mc.samples >= kMinEmpiricalSamples, ErrorKind::InvalidArgument,
          fmt::format("empirical error laws need at least {} samples", kMinEmpiricalSamples));
  ErrorSampler sampler(model, est, mc.samples, mc.seed);
  return Empirical{sampler.errors_at(theta), mc.seed};
}

std::vector<double> simulate_estimates(const GaussianLocationModel& model,
                                       const EstimatorSpec& est, double theta, std::size_t count,
                                       std::uint64_t seed) {
  return ErrorSampler(model, est, count, seed).estimates_at(theta);
}

}  // namespace minmaxlab
