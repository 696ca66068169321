#include "mecsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mecsim::channel {

double path_loss_db(double distance_m, double carrier_ghz) {
  if (distance_m <= 0.0) throw std::domain_error("path_loss_db: distance must be > 0");
  return 24.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_ghz) + 60.0;
}

double mean_gain(double distance_m, double carrier_ghz) {
  // Far-field reference distance of 1 m; sampled positions may land on top
  // of a server.
  const double d = std::max(distance_m, 1.0);
  return std::pow(10.0, -path_loss_db(d, carrier_ghz) / 10.0);
}

double draw_fading(RngStream& rng) { return rng.exponential(); }

double rate(std::size_t ue, std::size_t server, std::span<const double> powers_w,
            std::span<const int> assoc, const std::vector<std::vector<double>>& gains,
            double noise_w, double bandwidth_hz) {
  if (assoc[ue] != static_cast<int>(server)) return 0.0;
  double interference = 0.0;
  for (std::size_t other = 0; other < powers_w.size(); ++other) {
    if (other == ue || assoc[other] != static_cast<int>(server)) continue;
    interference += powers_w[other] * gains[other][server];
  }
  const double sinr = powers_w[ue] * gains[ue][server] / (noise_w + interference);
  return bandwidth_hz * std::log2(1.0 + sinr);
}

double max_rate(double p_max_w, double gain, double noise_w, double bandwidth_hz) {
  return bandwidth_hz * std::log2(1.0 + p_max_w * gain / noise_w);
}

InterferenceHistogram::InterferenceHistogram(double noise_w) {
  lo_ = noise_w * 1e-3;
  decades_per_bin_ = 9.0 / static_cast<double>(kLogBins);  // 1e-3 .. 1e6 relative
  probs_.assign(kLogBins + 1, 0.0);
  probs_[0] = 1.0;  // cold-start prior: no co-channel interference observed yet
  values_.resize(kLogBins + 1);
  values_[0] = 0.0;
  for (std::size_t b = 0; b < kLogBins; ++b) {
    const double lo = lo_ * std::pow(10.0, decades_per_bin_ * static_cast<double>(b));
    const double hi = lo * std::pow(10.0, decades_per_bin_);
    values_[b + 1] = std::sqrt(lo * hi);  // geometric bin center
  }
}

std::size_t InterferenceHistogram::bin_index(double interference_w) const {
  if (interference_w < 0.0)
    throw std::domain_error("InterferenceHistogram: negative interference");
  if (interference_w < lo_) return 0;
  const double b = std::floor(std::log10(interference_w / lo_) / decades_per_bin_);
  const auto idx = static_cast<std::size_t>(std::max(b, 0.0));
  return std::min(idx, kLogBins - 1) + 1;
}

void InterferenceHistogram::observe(double interference_w) {
  const std::size_t hit = bin_index(interference_w);
  const double t = static_cast<double>(count_);
  const double keep = (t + 1.0) / (t + 2.0);
  const double add = 1.0 / (t + 2.0);
  for (double& p : probs_) p *= keep;
  probs_[hit] += add;
  ++count_;
}

}  // namespace mecsim::channel
