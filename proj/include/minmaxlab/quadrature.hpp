#pragma once

#include <span>
#include <vector>

namespace minmaxlab {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule, computed once per m and cached.
const GaussLegendreRule& gauss_legendre(int m);

/// Nodes and weights for E[g(mu + s Z)], Z standard normal, with the normal
/// density folded into the weights.
///
/// The z-range [-12, 12] is cut into panels of width <= 2. Each point where
/// mu + s z hits one of `error_breaks` becomes a panel boundary, and panels
/// shrink geometrically toward it, so integrands like |mu + s z|^p with
/// non-integer p keep near-machine accuracy. `nodes` is the total budget;
/// every panel gets the same Gauss-Legendre order, at least 10.
struct NormalRule {
  std::vector<double> z;
  std::vector<double> weight;
  int panels = 0;
  int order = 0;

  std::size_t size() const { return z.size(); }
};

inline constexpr int kDefaultQuadratureNodes = 200;
inline constexpr double kNormalTruncation = 12.0;

NormalRule normal_rule(double mu, double s, std::span<const double> error_breaks,
                       int nodes = kDefaultQuadratureNodes);

/// E[g(mu + s Z)]. Degenerates to g(mu) when s == 0.
template <typename Fn>
double normal_expectation(Fn&& g, double mu, double s, std::span<const double> error_breaks,
                          int nodes = kDefaultQuadratureNodes) {
  if (s == 0.0) return g(mu);
  const NormalRule rule = normal_rule(mu, s, error_breaks, nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) total += rule.weight[i] * g(mu + s * rule.z[i]);
  return total;
}

}  // namespace minmaxlab
