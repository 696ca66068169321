#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mecsim {

// Derives independent stream seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded random stream with hand-rolled samplers. std::*_distribution is not
// pinned by the standard, so the samplers below are spelled out to keep runs
// reproducible across standard libraries.
class RngStream {
 public:
  RngStream() : gen_(0) {}
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : gen_(splitmix64(master_seed ^ splitmix64(stream_id))) {}

  // Uniform on (0, 1]; never returns 0 so log(u) is safe.
  double uniform() {
    const std::uint64_t bits = gen_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  // Exponential with mean 1 (Rayleigh-amplitude power gain).
  double exponential() { return -std::log(uniform()); }

  // Knuth's product-of-uniforms method; exact and fine for the small
  // per-slot arrival intensities used here.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mecsim
