#include "minmaxlab/loss.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace minmaxlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

LossSpec LossSpec::power(double p, double c) {
  require(positive_finite(p), ErrorKind::InvalidArgument, "power exponent p must be > 0");
  require(positive_finite(c), ErrorKind::InvalidArgument, "power constant c must be > 0");
  return LossSpec(Power{p, c});
}

LossSpec LossSpec::huber(double k) {
  require(positive_finite(k), ErrorKind::InvalidArgument, "huber threshold k must be > 0");
  return LossSpec(Huber{k});
}

LossSpec LossSpec::scaled(double lambda, LossSpec inner) {
  require(positive_finite(lambda), ErrorKind::NonPositiveScale,
          fmt::format("losses form a cone; scale must be > 0, got {}", lambda));
  return LossSpec(Scaled{lambda, std::make_shared<const LossSpec>(std::move(inner))});
}

LossSpec LossSpec::sum(std::vector<LossSpec> terms) {
  require(!terms.empty(), ErrorKind::InvalidArgument, "sum loss needs at least one term");
  return LossSpec(Sum{std::move(terms)});
}

double eval_error(const LossSpec& loss, double t) {
  const double at = std::abs(t);
  return std::visit(overloaded{
                        [at](const Power& pw) {
                          return pw.p == 2.0 ? pw.c * at * at : pw.c * std::pow(at, pw.p);
                        },
                        [at](const Huber& h) {
                          return at <= h.k ? 0.5 * at * at : h.k * at - 0.5 * h.k * h.k;
                        },
                        [t](const Scaled& s) { return s.lambda * eval_error(*s.inner, t); },
                        [t](const Sum& s) {
                          double total = 0.0;
                          for (const auto& term : s.terms) total += eval_error(term, t);
                          return total;
                        },
                    },
                    loss.node());
}

double eval_loss(const LossSpec& loss, double theta, double a) { return eval_error(loss, theta - a); }

std::vector<double> kinks(const LossSpec& loss) {
  std::vector<double> out;
  std::visit(overloaded{
                 [&](const Power& pw) {
                   // Even integer powers are polynomials.
                   if (!(pw.p == std::floor(pw.p) && std::fmod(pw.p, 2.0) == 0.0)) out.push_back(0.0);
                 },
                 [&](const Huber& h) { out.push_back(h.k); },
                 [&](const Scaled& s) { out = kinks(*s.inner); },
                 [&](const Sum& s) {
                   for (const auto& term : s.terms) {
                     auto k = kinks(term);
                     out.insert(out.end(), k.begin(), k.end());
                   }
                 },
             },
             loss.node());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string describe(const LossSpec& loss) {
  return std::visit(overloaded{
                        [](const Power& pw) { return fmt::format("Power(p={}, c={})", pw.p, pw.c); },
                        [](const Huber& h) { return fmt::format("Huber(k={})", h.k); },
                        [](const Scaled& s) {
                          return fmt::format("Scaled({}, {})", s.lambda, describe(*s.inner));
                        },
                        [](const Sum& s) {
                          std::string out = "Sum[";
                          for (std::size_t i = 0; i < s.terms.size(); ++i) {
                            if (i) out += ", ";
                            out += describe(s.terms[i]);
                          }
                          return out + "]";
                        },
                    },
                    loss.node());
}

LossSpec scale_loss(const LossSpec& loss, double lambda) { return LossSpec::scaled(lambda, loss); }

ExponentClassification classify_exponent(const LossSpec& loss, double theta0, ExponentWindow window,
                                          int points) {
  require(points >= 8, ErrorKind::InvalidArgument, "classifier needs at least 8 points");
  require(window.h_min > 0.0 && window.h_min < window.h_max && window.h_max < 1.0,
          ErrorKind::InvalidArgument, "classifier window must satisfy 0 < h_min < h_max < 1");

  const double log_lo = std::log(window.h_min);
  const double step = (std::log(window.h_max) - log_lo) / (points - 1);
  std::vector<double> xs, ys;
  xs.reserve(static_cast<std::size_t>(points));
  ys.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double log_h = log_lo + step * i;
    const double value = eval_loss(loss, theta0, theta0 + std::exp(log_h));
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorKind::DegenerateLoss,
                  fmt::format("{} vanishes or is non-finite at h = {}", describe(loss),
                              std::exp(log_h)));
    }
    xs.push_back(log_h);
    ys.push_back(std::log(value));
  }

  const double n = static_cast<double>(points);
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < points; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < points; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double residual = 0.0;
  for (int i = 0; i < points; ++i) {
    residual = std::max(residual, std::abs(ys[i] - (intercept + slope * xs[i])));
  }
  return {slope, std::exp(intercept), window, residual};
}

bool same_class(const LossSpec& a, const LossSpec& b, double tol) {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be > 0");
  return std::abs(classify_exponent(a).p_hat - classify_exponent(b).p_hat) <= tol;
}

}  // namespace minmaxlab
