#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "minmaxlab/error.hpp"

namespace minmaxlab {

class LossSpec;

/// c * |theta - a|^p
struct Power {
  double p = 2.0;
  double c = 1.0;
};

/// t^2/2 for |t| <= k, k|t| - k^2/2 beyond, with t = theta - a.
struct Huber {
  double k = 1.0;
};

struct Scaled {
  double lambda = 1.0;
  std::shared_ptr<const LossSpec> inner;
};

struct Sum {
  std::vector<LossSpec> terms;
};

/// A symmetric loss L(theta, a) = l(theta - a) with l >= 0 and l(0) = 0.
/// Immutable value type; build through the factory functions, which validate.
class LossSpec {
public:
  using Node = std::variant<Power, Scaled, Sum, Huber>;

  static LossSpec power(double p, double c = 1.0);
  static LossSpec huber(double k);
  static LossSpec scaled(double lambda, LossSpec inner);
  static LossSpec sum(std::vector<LossSpec> terms);

  const Node& node() const { return node_; }

private:
  explicit LossSpec(Node node) : node_(std::move(node)) {}
  Node node_;
};

double eval_loss(const LossSpec& loss, double theta, double a);

/// The loss as a function of the signed error t = theta - a.
double eval_error(const LossSpec& loss, double t);

/// Nonnegative |t| values where the loss is not smooth; quadrature splits there.
std::vector<double> kinks(const LossSpec& loss);

std::string describe(const LossSpec& loss);

/// Cone operation: lambda > 0 required (NonPositiveScale otherwise).
LossSpec scale_loss(const LossSpec& loss, double lambda);

struct ExponentWindow {
  double h_min = 1e-5;
  double h_max = 1e-2;
};

struct ExponentClassification {
  double p_hat = 0.0;
  double c_hat = 0.0;
  ExponentWindow window;
  double fit_residual = 0.0;
};

inline constexpr int kDefaultClassifierPoints = 16;

/// Leading-order power fit: regress log L(theta0, theta0 + h) on log h over
/// geometrically spaced h in the window. p_hat is the slope, c_hat = exp(intercept),
/// fit_residual the largest absolute residual.
ExponentClassification classify_exponent(const LossSpec& loss, double theta0 = 0.0,
                                         ExponentWindow window = {},
                                         int points = kDefaultClassifierPoints);

/// Fitted exponents agree within tol at the default window.
bool same_class(const LossSpec& a, const LossSpec& b, double tol);

}  // namespace minmaxlab
