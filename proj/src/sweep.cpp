#include "mecsim/sweep.hpp"

#include <atomic>
#include <thread>

namespace mecsim::sweep {

std::vector<GridPoint> expand_grid(const SimConfig& base) {
  const auto lambdas = base.sweep_lambda_bps.empty()
                           ? std::vector<double>{base.ues[0].arrival_rate_bps}
                           : base.sweep_lambda_bps;
  const auto densities = base.sweep_cycles_per_bit.empty()
                             ? std::vector<double>{base.ues[0].cycles_per_bit}
                             : base.sweep_cycles_per_bit;
  const auto vs = base.sweep_tradeoff_v.empty()
                      ? std::vector<double>{base.net.tradeoff_v}
                      : base.sweep_tradeoff_v;
  const auto ues = base.sweep_num_ues.empty() ? std::vector<int>{base.net.num_ues}
                                              : base.sweep_num_ues;
  const auto policies = base.sweep_policies.empty()
                            ? std::vector<std::string>{"proposed"}
                            : base.sweep_policies;
  const auto seeds = base.sweep_seeds.empty()
                         ? std::vector<std::uint64_t>{base.net.rng_seed}
                         : base.sweep_seeds;

  std::vector<GridPoint> grid;
  for (double l : lambdas)
    for (double d : densities)
      for (double v : vs)
        for (int u : ues)
          for (const auto& p : policies)
            for (std::uint64_t s : seeds)
              grid.push_back({l, d, v, u, p, s});
  return grid;
}

SimConfig apply_point(const SimConfig& base, const GridPoint& p) {
  SimConfig cfg = base;
  cfg.net.tradeoff_v = p.tradeoff_v;
  cfg.net.rng_seed = p.seed;
  if (p.num_ues != base.net.num_ues) {
    cfg.net.num_ues = p.num_ues;
    cfg.ues.assign(static_cast<std::size_t>(p.num_ues),
                   base.ues.empty() ? UeProfile{} : base.ues[0]);
    if (!base.net.ue_positions.empty()) cfg.net.ue_positions.clear();  // re-sample
  }
  for (auto& u : cfg.ues) {
    u.arrival_rate_bps = p.lambda_bps;
    u.cycles_per_bit = p.cycles_per_bit;
  }
  return cfg;
}

std::vector<engine::MetricsRecord> run_sweep(const SimConfig& base, int workers,
                                             bool engine_openmp) {
  const std::vector<GridPoint> grid = expand_grid(base);
  std::vector<engine::MetricsRecord> records(grid.size());

  if (workers <= 1) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      engine::EngineOptions opts;
      opts.policy = engine::parse_policy(grid[g].policy);
      opts.use_openmp = engine_openmp;
      records[g] = engine::run_simulation(apply_point(base, grid[g]), opts);
    }
    return records;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t g = next.fetch_add(1);
      if (g >= grid.size()) return;
      engine::EngineOptions opts;
      opts.policy = engine::parse_policy(grid[g].policy);
      opts.use_openmp = false;  // one grid point per thread already
      records[g] = engine::run_simulation(apply_point(base, grid[g]), opts);
    }
  };
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), grid.size());
  pool.reserve(n);
  for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

}  // namespace mecsim::sweep
