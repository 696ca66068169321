#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mecsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Per-UE profile. All UEs share one profile in the config file; the
// simulation keeps a copy per UE so tests can build heterogeneous networks.
struct UeProfile {
  double p_max_w = 1.0;              // power budget, 30 dBm default
  double cycles_per_bit = 8250.0;    // processing density L
  double arrival_rate_bps = 100e3;   // lambda
  double kappa = 1e-27;              // CPU power = kappa * f^3
  double unit_task_bits = 12000.0;   // 1500 bytes
  double d_local_multiplier = 100.0;   // d^L(t) = mult * avg split arrival
  double d_offload_multiplier = 100.0; // d^O(t) likewise
  double eps_local = 0.01;
  double eps_offload = 0.01;
  double sigma_local_th = 40e6;   // bits
  double xi_local_th = 0.3;
  double sigma_offload_th = 40e6;
  double xi_offload_th = 0.3;
};

struct ServerProfile {
  int core_count = 8;           // N_j
  double core_speed_hz = 1e10;  // f_j^max per core
  double d_server_s = 20.0;     // d_ji, seconds of moving-average rate
  double eps_server = 0.01;
  double sigma_server_th = 40e6;
  double xi_server_th = 0.3;
};

enum class Mobility { kStatic, kRefreshPerFrame };

struct NetworkConfig {
  int num_ues = 30;
  int num_servers = 4;
  double area_side_m = 100.0;
  std::vector<Point> server_positions;  // empty: quadrant centers (4 servers)
  std::vector<Point> ue_positions;      // empty: sampled uniformly from seed
  double slot_s = 0.04;                 // tau, one coherence block
  int frame_slots = 100;                // T_0
  double bandwidth_hz = 10e6;           // W per server
  double noise_psd_dbm_hz = -174.0;     // N_0
  double tradeoff_v = 0.0;              // Lyapunov penalty weight V
  double carrier_ghz = 5.8;
  std::int64_t horizon_slots = 20000;   // T
  std::uint64_t rng_seed = 1;
  Mobility mobility = Mobility::kStatic;

  double noise_w() const;  // N_0 * W in watts
};

struct SimConfig {
  NetworkConfig net;
  std::vector<UeProfile> ues;        // size num_ues
  std::vector<ServerProfile> servers;  // size num_servers

  // Sweep axes (used by the sweep runner; empty = not swept).
  std::vector<double> sweep_lambda_bps;
  std::vector<double> sweep_cycles_per_bit;
  std::vector<double> sweep_tradeoff_v;
  std::vector<int> sweep_num_ues;
  std::vector<std::string> sweep_policies;
  std::vector<std::uint64_t> sweep_seeds;
};

// Parses the flat key = value text format (see configs/table2.cfg). Unknown
// keys are rejected so typos surface early.
SimConfig parse_config_file(const std::string& path);
SimConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

// Throws ConfigError naming the offending field.
void validate(const SimConfig& cfg);

}  // namespace mecsim
