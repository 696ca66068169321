#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mecsim/rng.hpp"

namespace mecsim::evt {

// Generalized Pareto distribution of exceedances over a threshold.
// CCDF G(x; sigma, xi) = (1 + xi*x/sigma)^(-1/xi)  (xi != 0)
//                      = exp(-x/sigma)             (xi == 0)
// Support is x >= 0, additionally x <= -sigma/xi when xi < 0.
struct Gpd {
  double scale = 1.0;  // sigma > 0
  double shape = 0.0;  // xi, any real
};

struct GpdMoments {
  std::optional<double> mean;      // sigma/(1-xi), defined for xi < 1
  std::optional<double> variance;  // sigma^2/((1-xi)^2 (1-2 xi)), xi < 1/2
};

struct GpdFit {
  Gpd gpd;
  double threshold = 0.0;        // threshold the excesses were taken over
  std::size_t exceedance_count = 0;
  double ks_statistic = 0.0;     // sup |empirical CDF - fitted CDF|
};

double gpd_ccdf(const Gpd& g, double x);
GpdMoments gpd_mean_var(const Gpd& g);

// Inverse-transform sample: x = sigma*((u^-xi - 1)/xi), u uniform (0,1].
double gpd_sample(const Gpd& g, RngStream& rng);

// Probability-weighted-moments fit of excess samples (all > 0).
// Requires >= 30 samples with nonzero spread.
GpdFit fit_gpd_pot(std::span<const double> excesses, double threshold = 0.0);

// Drain rates of the tail virtual queues: the conditional-mean bound
// sigma_th/(1-xi_th) and the conditional-second-moment bound
// 2*sigma_th^2/((1-xi_th)(1-2*xi_th)). Needs xi_th < 1/2.
struct ConstraintTargets {
  double mean_bound = 0.0;
  double second_moment_bound = 0.0;
};
ConstraintTargets constraint_targets(double sigma_th, double xi_th);

// Kolmogorov-Smirnov sup-distance between the empirical CDF of samples and
// the fitted GPD CDF.
double ks_distance(std::span<const double> samples, const Gpd& g);

}  // namespace mecsim::evt
