#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mecsim/engine.hpp"

namespace mecsim::sweep {

struct GridPoint {
  double lambda_bps = 0.0;
  double cycles_per_bit = 0.0;
  double tradeoff_v = 0.0;
  int num_ues = 0;
  std::string policy;
  std::uint64_t seed = 0;
};

// Cartesian product of the config's sweep_* axes; unswept axes take the base
// config's value. Always at least one point.
std::vector<GridPoint> expand_grid(const SimConfig& base);

SimConfig apply_point(const SimConfig& base, const GridPoint& p);

// Runs every grid point, fanning out to `workers` threads (1 = in place).
// Results are indexed by grid position regardless of completion order; the
// engine runs its serial path when workers > 1 to avoid oversubscription.
std::vector<engine::MetricsRecord> run_sweep(const SimConfig& base, int workers,
                                             bool engine_openmp);

}  // namespace mecsim::sweep
