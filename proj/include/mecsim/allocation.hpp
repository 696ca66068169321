#pragma once

#include <span>
#include <vector>

namespace mecsim::allocation {

// Per-slot UE decision plus the KKT multipliers of the budget and
// nonnegativity constraints (kept for solver diagnostics and tests).
struct UeAllocation {
  double cpu_hz = 0.0;      // f_i
  double tx_power_w = 0.0;  // P_i
  double gamma = 0.0;       // multiplier of kappa f^3 + P <= P_max
  double alpha1 = 0.0;      // multiplier of f >= 0
  double alpha2 = 0.0;      // multiplier of P >= 0
};

struct SolverInputs {
  double beta_local = 0.0;
  double beta_offload = 0.0;
  double beta_server = 0.0;  // weight of the serving server's queue for this UE
  double gain = 0.0;         // current-slot channel gain to the serving server
  std::span<const double> interf_probs;   // histogram over interference bins
  std::span<const double> interf_values;  // bin interference values (W)
  double tradeoff_v = 0.0;
  double tau_s = 0.0;
  double bandwidth_hz = 0.0;
  double noise_w = 0.0;  // N_0 * W
  double cycles_per_bit = 1.0;
  double kappa = 1e-27;
  double p_max_w = 1.0;
};

// Expected marginal value of transmit power at level p_w:
//   E_I[(beta_offload - beta_server) * tau * W * h / ((N0 W + I + p h) ln 2)]
// evaluated as a finite sum over the histogram bins. Strictly decreasing in
// p_w whenever the weight is positive.
double marginal_rate_value(double p_w, const SolverInputs& in);

// Optimal (f, P) of the per-UE drift-plus-penalty subproblem:
//   f* = sqrt(beta_local * tau / (3 L kappa (V + gamma*)))
//   P* solves marginal_rate_value(P) = V + gamma* when active, else 0,
// with gamma* > 0 exactly when the power budget binds. Always returns a
// feasible point: kappa f^3 + P <= P_max (+1e-9 rounding slack).
UeAllocation solve_ue_allocation(const SolverInputs& in);

struct TaskSplit {
  double local_bits = 0.0;
  double offload_bits = 0.0;
};

// All-or-nothing split: local when beta_local <= beta_offload.
TaskSplit split_tasks(double arrival_bits, double beta_local, double beta_offload);

// Greedy CPU-core dedication: grant one full-speed core to at most
// `core_count` UEs with the largest positive beta/L, lower index on ties.
// Returns per-UE core speed (0 or core_speed_hz).
std::vector<double> schedule_cores(std::span<const double> beta_server,
                                   std::span<const double> cycles_per_bit,
                                   int core_count, double core_speed_hz);

}  // namespace mecsim::allocation
