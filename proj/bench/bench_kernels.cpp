// Serial reference vs OpenMP decision kernel, measured on full engine slots.

#include <benchmark/benchmark.h>

#include "mecsim/engine.hpp"

namespace {

mecsim::SimConfig bench_config(int ues) {
  mecsim::SimConfig cfg;
  cfg.net.num_ues = ues;
  cfg.net.num_servers = 4;
  cfg.net.horizon_slots = 1 << 20;  // stepped manually
  cfg.ues.assign(static_cast<std::size_t>(ues), mecsim::UeProfile{});
  cfg.servers.assign(4, mecsim::ServerProfile{});
  return cfg;
}

void bench_slots(benchmark::State& state, bool use_openmp) {
  mecsim::engine::EngineOptions opts;
  opts.use_openmp = use_openmp;
  opts.record_exceedances = false;
  mecsim::engine::Simulation sim(bench_config(static_cast<int>(state.range(0))), opts);
  // warm up past the cold-start slots so the solver does real work
  for (int t = 0; t < 200; ++t) sim.step();
  for (auto _ : state) {
    sim.step();
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void slot_serial(benchmark::State& state) { bench_slots(state, false); }
void slot_openmp(benchmark::State& state) { bench_slots(state, true); }

BENCHMARK(slot_serial)->Arg(30)->Arg(80)->Unit(benchmark::kMicrosecond);
BENCHMARK(slot_openmp)->Arg(30)->Arg(80)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
