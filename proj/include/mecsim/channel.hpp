#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mecsim/rng.hpp"

namespace mecsim::channel {

// Indoor path loss 24*log10(x) + 20*log10(f_ghz) + 60 in dB, x in meters.
double path_loss_db(double distance_m, double carrier_ghz = 5.8);

// Linear mean power gain (path loss only; unit-mean fading averages out).
double mean_gain(double distance_m, double carrier_ghz = 5.8);

// Unit-mean exponential power gain (Rayleigh amplitude).
double draw_fading(RngStream& rng);

// Uplink Shannon rate of UE i toward server j in bit/s. `assoc[i]` is the
// serving server index per UE (-1 when unassociated). Interference comes
// from the other UEs associated with j. Returns 0 when i is not on j.
double rate(std::size_t ue, std::size_t server, std::span<const double> powers_w,
            std::span<const int> assoc, const std::vector<std::vector<double>>& gains,
            double noise_w, double bandwidth_hz);

// Interference-free full-power rate W*log2(1 + P_max*h/(N0*W)).
double max_rate(double p_max_w, double gain, double noise_w, double bandwidth_hz);

// Empirical distribution of the aggregate interference seen at the serving
// server, kept as probabilities over fixed bins. The recursion
//   Pr(b; t+1) = 1{bin(I)=b}/(t+2) + (t+1) Pr(b; t)/(t+2)
// needs a finite support, so observations are quantized: bin 0 holds zero /
// underflow interference, then `kLogBins` logarithmically spaced bins cover
// [noise*1e-3, noise*1e6]; overflow clamps to the top bin.
class InterferenceHistogram {
 public:
  static constexpr std::size_t kLogBins = 64;

  InterferenceHistogram() = default;
  explicit InterferenceHistogram(double noise_w);

  void observe(double interference_w);

  std::span<const double> probabilities() const { return probs_; }
  std::span<const double> bin_values() const { return values_; }
  std::uint64_t sample_count() const { return count_; }
  std::size_t bin_index(double interference_w) const;

 private:
  std::vector<double> probs_;   // sums to 1
  std::vector<double> values_;  // representative interference per bin (W)
  double lo_ = 0.0;             // lower edge of the log range
  double decades_per_bin_ = 0.0;
  std::uint64_t count_ = 0;
};

}  // namespace mecsim::channel
