#include "minmaxlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "minmaxlab/error.hpp"

namespace minmaxlab {

namespace {

GaussLegendreRule compute_gauss_legendre(int m) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_m.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return rule;
}

constexpr double kMaxPanelWidth = 2.0;
constexpr double kGradeStart = 0.5;
constexpr double kGradeRatio = 0.2;
constexpr int kGradeLevels = 6;
constexpr int kMinPanelOrder = 10;

}  // namespace

const GaussLegendreRule& gauss_legendre(int m) {
  require(m >= 1 && m <= 1024, ErrorKind::InvalidArgument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_gauss_legendre(m));
  return *slot;
}

NormalRule normal_rule(double mu, double s, std::span<const double> error_breaks, int nodes) {
  require(nodes >= 8, ErrorKind::InvalidArgument, "quadrature needs at least 8 nodes");
  require(s > 0.0 && std::isfinite(s) && std::isfinite(mu), ErrorKind::InvalidArgument,
          "normal_rule requires finite mu and s > 0");
  const double zmax = kNormalTruncation;

  std::vector<double> kinks_z;
  for (double b : error_breaks) {
    const double z = (b - mu) / s;
    if (z > -zmax && z < zmax) kinks_z.push_back(z);
  }
  std::sort(kinks_z.begin(), kinks_z.end());
  kinks_z.erase(std::unique(kinks_z.begin(), kinks_z.end()), kinks_z.end());

  std::vector<double> cuts{-zmax, zmax};
  for (double k : kinks_z) {
    cuts.push_back(k);
    for (int j = 0; j < kGradeLevels; ++j) {
      const double d = kGradeStart * std::pow(kGradeRatio, j);
      for (double c : {k - d, k + d}) {
        if (c > -zmax && c < zmax) cuts.push_back(c);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Graded cut sets from neighbouring kinks can interleave; the panel list
  // is simply every gap, further split to the maximum width.
  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / kMaxPanelWidth)));
    const double w = (b - a) / pieces;
    for (int j = 0; j < pieces; ++j) {
      const double lo = a + w * j;
      const double hi = (j + 1 == pieces) ? b : a + w * (j + 1);
      panels.emplace_back(lo, hi);
    }
  }

  const int order = std::max(kMinPanelOrder, (nodes + static_cast<int>(panels.size()) - 1) /
                                    static_cast<int>(panels.size()));
  const auto& gl = gauss_legendre(order);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  NormalRule rule;
  rule.panels = static_cast<int>(panels.size());
  rule.order = order;
  rule.z.reserve(panels.size() * static_cast<std::size_t>(order));
  rule.weight.reserve(rule.z.capacity());
  for (const auto& [lo, hi] : panels) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int i = 0; i < order; ++i) {
      const double z = mid + half * gl.nodes[static_cast<std::size_t>(i)];
      rule.z.push_back(z);
      rule.weight.push_back(half * gl.weights[static_cast<std::size_t>(i)] * inv_sqrt_2pi *
                            std::exp(-0.5 * z * z));
    }
  }
  return rule;
}

}  // namespace minmaxlab
