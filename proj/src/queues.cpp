#include "mecsim/queues.hpp"

#include <algorithm>
#include <cmath>

namespace mecsim::queues {

double step_local_queue(double q, double arrival_bits, double cpu_hz, double tau_s,
                        double cycles_per_bit) {
  return std::max(q + arrival_bits - tau_s * cpu_hz / cycles_per_bit, 0.0);
}

double step_offload_queue(double q, double arrival_bits, double served_bits) {
  return std::max(q + arrival_bits - served_bits, 0.0);
}

double step_server_queue(double z, double offered_bits, double tau_rate_bits,
                         double service_bits) {
  return std::max(z + std::min(offered_bits, tau_rate_bits) - service_bits, 0.0);
}

double step_server_queue_upper(double z, double tau_rate_bits, double service_bits) {
  return std::max(z + tau_rate_bits - service_bits, 0.0);
}

namespace {

void step_tail_family(double& vq_mean, double& vq_sq, double& vq_viol,
                      double value_next, double threshold_next,
                      const TailConstraint& c) {
  const auto x = excess_over(value_next, threshold_next);
  if (x) {
    const double y = *x * *x;
    vq_mean = std::max(vq_mean + (*x - c.targets.mean_bound), 0.0);
    vq_sq = std::max(vq_sq + (y - c.targets.second_moment_bound), 0.0);
    vq_viol = std::max(vq_viol + 1.0 - c.epsilon, 0.0);
  } else {
    vq_viol = std::max(vq_viol - c.epsilon, 0.0);
  }
}

}  // namespace

void step_ue_virtual_queues(UeQueues& q, double q_local_next, double q_offload_next,
                            double d_local_next, double d_offload_next,
                            const TailConstraint& local, const TailConstraint& offload) {
  step_tail_family(q.vq_local_excess_mean, q.vq_local_excess_sq, q.vq_local_violation,
                   q_local_next, d_local_next, local);
  step_tail_family(q.vq_offload_excess_mean, q.vq_offload_excess_sq,
                   q.vq_offload_violation, q_offload_next, d_offload_next, offload);
}

void step_server_virtual_queues(ServerPairQueues& s, double z_next,
                                double threshold_next, const TailConstraint& c) {
  step_tail_family(s.vq_excess_mean, s.vq_excess_sq, s.vq_violation, z_next,
                   threshold_next, c);
}

namespace {

double beta_generic(double vq_mean, double vq_sq, double vq_viol, double q,
                    bool indicator) {
  double b = vq_viol + q;
  if (indicator) b += vq_mean + 2.0 * vq_sq * q + 2.0 * q * q * q + q;
  return b;
}

}  // namespace

double beta_local(const UeQueues& q, double arrival_total_bits, double d_local) {
  return beta_generic(q.vq_local_excess_mean, q.vq_local_excess_sq, q.vq_local_violation,
                      q.q_local, q.q_local + arrival_total_bits > d_local);
}

double beta_offload(const UeQueues& q, double arrival_total_bits, double d_offload) {
  return beta_generic(q.vq_offload_excess_mean, q.vq_offload_excess_sq,
                      q.vq_offload_violation, q.q_offload,
                      q.q_offload + arrival_total_bits > d_offload);
}

double beta_server(const ServerPairQueues& s, double tau_rmax_bits,
                   double threshold_bits) {
  return beta_generic(s.vq_excess_mean, s.vq_excess_sq, s.vq_violation, s.backlog,
                      s.backlog + tau_rmax_bits > threshold_bits);
}

}  // namespace mecsim::queues
