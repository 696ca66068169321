#include "mecsim/evt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mecsim/common.hpp"

namespace mecsim::evt {

double gpd_ccdf(const Gpd& g, double x) {
  if (g.scale <= 0.0) throw std::domain_error("gpd_ccdf: scale must be positive");
  if (x < 0.0) throw std::domain_error("gpd_ccdf: x below support");
  if (g.shape == 0.0) return std::exp(-x / g.scale);
  if (g.shape < 0.0 && x > -g.scale / g.shape) return 0.0;  // beyond upper endpoint
  return std::pow(1.0 + g.shape * x / g.scale, -1.0 / g.shape);
}

GpdMoments gpd_mean_var(const Gpd& g) {
  GpdMoments m;
  if (g.shape < 1.0) m.mean = g.scale / (1.0 - g.shape);
  if (g.shape < 0.5) {
    m.variance = g.scale * g.scale /
                 ((1.0 - g.shape) * (1.0 - g.shape) * (1.0 - 2.0 * g.shape));
  }
  return m;
}

double gpd_sample(const Gpd& g, RngStream& rng) {
  const double u = rng.uniform();
  if (g.shape == 0.0) return -g.scale * std::log(u);
  return g.scale * (std::pow(u, -g.shape) - 1.0) / g.shape;
}

ConstraintTargets constraint_targets(double sigma_th, double xi_th) {
  if (sigma_th <= 0.0) throw ConfigError("constraint_targets: sigma_th must be > 0");
  if (xi_th >= 0.5)
    throw ConfigError("constraint_targets: xi_th must be < 1/2 for a finite second moment");
  ConstraintTargets t;
  t.mean_bound = sigma_th / (1.0 - xi_th);
  t.second_moment_bound =
      2.0 * sigma_th * sigma_th / ((1.0 - xi_th) * (1.0 - 2.0 * xi_th));
  return t;
}

double ks_distance(std::span<const double> samples, const Gpd& g) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 1.0 - gpd_ccdf(g, sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(cdf - lo), std::abs(hi - cdf)));
  }
  return d;
}

GpdFit fit_gpd_pot(std::span<const double> excesses, double threshold) {
  if (excesses.size() < 30)
    throw std::runtime_error("fit_gpd_pot: need at least 30 exceedances");

  std::vector<double> sorted(excesses.begin(), excesses.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  // Sample probability-weighted moments b0 = mean, b1 unbiased estimate of
  // E[X (1-F(X))] using ascending order statistics.
  double b0 = 0.0;
  double b1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    b0 += sorted[i];
    b1 += sorted[i] * static_cast<double>(n - 1 - i);
  }
  b0 /= static_cast<double>(n);
  b1 /= static_cast<double>(n) * static_cast<double>(n - 1);

  const double denom = b0 - 2.0 * b1;
  if (sorted.front() == sorted.back() || denom == 0.0)
    throw std::runtime_error("fit_gpd_pot: degenerate sample, zero spread");

  GpdFit fit;
  fit.gpd.shape = 2.0 - b0 / denom;
  fit.gpd.scale = 2.0 * b0 * b1 / denom;
  if (fit.gpd.scale <= 0.0)
    throw std::runtime_error("fit_gpd_pot: estimated scale is nonpositive");
  fit.threshold = threshold;
  fit.exceedance_count = n;
  fit.ks_statistic = ks_distance(sorted, fit.gpd);
  return fit;
}

}  // namespace mecsim::evt
