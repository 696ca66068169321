#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "mecsim/evt.hpp"

namespace mecsim::queues {

// Cumulative mean m(t) = (1/(t+1)) * sum_{s=0..t} x(s).
struct MovingAverage {
  double mean = 0.0;
  std::uint64_t count = 0;

  void add(double x) {
    const double t = static_cast<double>(count);
    mean = (t * mean + x) / (t + 1.0);
    ++count;
  }
};

// Per-UE physical queues (bits), the six tail/violation virtual queues, and
// the moving-average split arrivals that drive the dynamic thresholds.
struct UeQueues {
  double q_local = 0.0;    // local-computation backlog
  double q_offload = 0.0;  // task-offloading backlog

  double vq_local_excess_mean = 0.0;  // drift queue for the conditional mean
  double vq_local_excess_sq = 0.0;    // ... for the conditional second moment
  double vq_offload_excess_mean = 0.0;
  double vq_offload_excess_sq = 0.0;
  double vq_local_violation = 0.0;    // drift queue for Pr(Q > d) <= eps
  double vq_offload_violation = 0.0;

  MovingAverage avg_arrival_local;    // of split arrivals A^L
  MovingAverage avg_arrival_offload;  // of split arrivals A^O
};

// Per (server, UE) offloaded-task queue with its virtual queues and the
// moving-average uplink rate that defines the server-side threshold.
struct ServerPairQueues {
  double backlog = 0.0;  // Z, bits awaiting computation at the server
  double vq_excess_mean = 0.0;
  double vq_excess_sq = 0.0;
  double vq_violation = 0.0;
  MovingAverage avg_rate;  // bit/s, includes zero-rate slots
};

struct BetaWeights {
  double local = 0.0;    // weight of the local-computation queue
  double offload = 0.0;  // weight of the task-offloading queue
};

// Dynamic threshold multiplier rule: d(t) = multiplier * avg(t-1); an empty
// average means no threshold yet, so no exceedance can be recorded.
inline double dynamic_threshold(double multiplier, const MovingAverage& avg) {
  if (avg.mean <= 0.0) return std::numeric_limits<double>::infinity();
  return multiplier * avg.mean;
}

// One-slot physical queue recursions, all clamped at zero.
double step_local_queue(double q, double arrival_bits, double cpu_hz, double tau_s,
                        double cycles_per_bit);
double step_offload_queue(double q, double arrival_bits, double served_bits);
// Server queue: arrival is min{Q^O + A^O, tau*R}, service tau*f/L.
double step_server_queue(double z, double offered_bits, double tau_rate_bits,
                         double service_bits);
// Upper-bound recursion that ignores the arrival clamp; dominates the true
// trajectory from equal starts.
double step_server_queue_upper(double z, double tau_rate_bits, double service_bits);

// Excess over a threshold, present only on strict exceedance.
inline std::optional<double> excess_over(double value, double threshold) {
  if (value > threshold) return value - threshold;
  return std::nullopt;
}

// Virtual-queue updates; all indicators test NEXT-slot queue values against
// next-slot thresholds. When the indicator is off the excess queues are
// unchanged and the violation queues drain by eps.
struct TailConstraint {
  evt::ConstraintTargets targets;  // drains of the excess-mean / second-moment queues
  double epsilon = 0.0;            // drain of the violation queue
};

void step_ue_virtual_queues(UeQueues& q, double q_local_next, double q_offload_next,
                            double d_local_next, double d_offload_next,
                            const TailConstraint& local, const TailConstraint& offload);
void step_server_virtual_queues(ServerPairQueues& s, double z_next,
                                double threshold_next, const TailConstraint& c);

// Per-slot decision weights.
// beta^L = (Q^{L,(X)} + 2 Q^{L,(Y)} Q^L + 2 (Q^L)^3 + Q^L) * 1{Q^L + A > d^L}
//          + Q^{L,(Q)} + Q^L, and symmetrically for beta^O.
double beta_local(const UeQueues& q, double arrival_total_bits, double d_local);
double beta_offload(const UeQueues& q, double arrival_total_bits, double d_offload);
// beta_ji = (Q^(X) + 2 Q^(Y) Z + 2 Z^3 + Z) * 1{Z + tau*Rmax > threshold}
//           + Q^(Z) + Z with threshold = Rbar(t-1) * d_ji.
double beta_server(const ServerPairQueues& s, double tau_rmax_bits, double threshold_bits);

}  // namespace mecsim::queues
