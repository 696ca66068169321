#include "mecsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mecsim/common.hpp"
#include "mecsim/evt.hpp"

namespace mecsim::engine {

PolicyKind parse_policy(const std::string& name) {
  if (name == "proposed") return PolicyKind::kProposed;
  if (name == "no-mec") return PolicyKind::kNoMec;
  if (name == "full-offload") return PolicyKind::kFullOffload;
  if (name == "rss-association") return PolicyKind::kRssAssociation;
  throw ConfigError("policy: unknown '" + name +
                    "' (proposed|no-mec|full-offload|rss-association)");
}

std::string policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::kProposed: return "proposed";
    case PolicyKind::kNoMec: return "no-mec";
    case PolicyKind::kFullOffload: return "full-offload";
    case PolicyKind::kRssAssociation: return "rss-association";
  }
  return "?";
}

double littles_delay_s(double sum_queue_bits, double sum_departed_bits,
                       std::int64_t slots, double tau_s) {
  if (slots <= 0) return 0.0;
  const double mean_q = sum_queue_bits / static_cast<double>(slots);
  const double dep_rate = sum_departed_bits / static_cast<double>(slots);
  if (dep_rate <= 0.0)
    return mean_q <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return tau_s * mean_q / dep_rate;
}

Simulation::Simulation(SimConfig cfg, EngineOptions opts)
    : cfg_(std::move(cfg)), opts_(opts) {
  st_ = build_network(cfg_);
  arrival_rng_ = RngStream(cfg_.net.rng_seed, kStreamArrivals);
  fading_rng_ = RngStream(cfg_.net.rng_seed, kStreamFading);

  const std::size_t U = st_.num_ues();
  const std::size_t S = st_.num_servers();
  assign_.assign(U, -1);
  estimator_ = matching::WeightEstimator(U, S);

  arrivals_.assign(U, 0.0);
  d_local_.assign(U, 0.0);
  d_offload_.assign(U, 0.0);
  beta_local_.assign(U, 0.0);
  beta_offload_.assign(U, 0.0);
  gains_.assign(U, std::vector<double>(S, 0.0));
  beta_server_.assign(S, std::vector<double>(U, 0.0));
  thr_server_.assign(S, std::vector<double>(U, 0.0));
  core_speed_.assign(S, std::vector<double>(U, 0.0));
  split_.assign(U, {});
  alloc_.assign(U, {});
  rate_.assign(U, 0.0);
  interf_obs_.assign(U, 0.0);

  acc_.assign(U, {});
  const auto horizon = static_cast<std::size_t>(cfg_.net.horizon_slots);
  for (auto& a : acc_) {
    a.samples_local.reserve(horizon);
    a.samples_offload.reserve(horizon);
  }
  viol_pair_.assign(S, std::vector<std::int64_t>(U, 0));

  vq_interval_ = opts_.vq_sample_interval > 0 ? opts_.vq_sample_interval
                                              : cfg_.net.frame_slots;
}

void Simulation::associate_frame() {
  if (opts_.policy == PolicyKind::kNoMec) return;

  if (cfg_.net.mobility == Mobility::kRefreshPerFrame && st_.clock.slot > 0)
    refresh_ue_positions(st_);

  matching::MatchingInputs in;
  in.mean_gains = st_.mean_gains;
  in.beta_offload_est = estimator_.offload_estimates();
  in.beta_server_est = estimator_.server_estimates();
  in.p_max_w.resize(st_.num_ues());
  for (std::size_t i = 0; i < st_.num_ues(); ++i) in.p_max_w[i] = cfg_.ues[i].p_max_w;
  in.noise_w = cfg_.net.noise_w();

  matching::Matching m;
  if (opts_.policy == PolicyKind::kRssAssociation) {
    m = matching::rss_association(in);
  } else {
    m = matching::run_matching(in);
  }
  assign_ = m.server_of;
  ++matching_frames_;
  if (m.converged) ++matching_converged_;
}

void Simulation::decide_ue(std::size_t i) {
  const UeProfile& up = cfg_.ues[i];
  const double a = arrivals_[i];

  // Task split (all-or-nothing by queue weight), with the baselines pinning
  // one side.
  if (opts_.policy == PolicyKind::kNoMec) {
    split_[i] = {a, 0.0};
  } else if (opts_.policy == PolicyKind::kFullOffload) {
    split_[i] = {0.0, a};
  } else {
    split_[i] = allocation::split_tasks(a, beta_local_[i], beta_offload_[i]);
  }

  allocation::SolverInputs si;
  si.beta_local = opts_.policy == PolicyKind::kFullOffload ? 0.0 : beta_local_[i];
  si.tradeoff_v = cfg_.net.tradeoff_v;
  si.tau_s = cfg_.net.slot_s;
  si.bandwidth_hz = cfg_.net.bandwidth_hz;
  si.noise_w = cfg_.net.noise_w();
  si.cycles_per_bit = up.cycles_per_bit;
  si.kappa = up.kappa;
  si.p_max_w = up.p_max_w;
  const int j = assign_[i];
  if (j >= 0) {
    si.beta_offload = beta_offload_[i];
    si.beta_server = beta_server_[static_cast<std::size_t>(j)][i];
    si.gain = gains_[i][static_cast<std::size_t>(j)];
    const auto& h = st_.hist[i][static_cast<std::size_t>(j)];
    si.interf_probs = h.probabilities();
    si.interf_values = h.bin_values();
  }
  alloc_[i] = allocation::solve_ue_allocation(si);
}

void Simulation::step() {
  const std::size_t U = st_.num_ues();
  const std::size_t S = st_.num_servers();
  const NetworkConfig& net = cfg_.net;
  const double tau = net.slot_s;
  const double noise = net.noise_w();
  const bool server_side = opts_.policy != PolicyKind::kNoMec;

  if (st_.clock.is_frame_boundary()) associate_frame();

  // Exogenous randomness, fixed draw order.
  for (std::size_t i = 0; i < U; ++i) {
    const UeProfile& up = cfg_.ues[i];
    const double mean_units = up.arrival_rate_bps * tau / up.unit_task_bits;
    arrivals_[i] = up.unit_task_bits * static_cast<double>(arrival_rng_.poisson(mean_units));
  }
  for (std::size_t i = 0; i < U; ++i)
    for (std::size_t j = 0; j < S; ++j)
      gains_[i][j] = st_.mean_gains[i][j] * channel::draw_fading(fading_rng_);

  // Slot-t thresholds and decision weights.
  for (std::size_t i = 0; i < U; ++i) {
    const UeProfile& up = cfg_.ues[i];
    const auto& q = st_.ue[i];
    d_local_[i] = queues::dynamic_threshold(up.d_local_multiplier, q.avg_arrival_local);
    d_offload_[i] = queues::dynamic_threshold(up.d_offload_multiplier, q.avg_arrival_offload);
    beta_local_[i] = queues::beta_local(q, arrivals_[i], d_local_[i]);
    beta_offload_[i] = queues::beta_offload(q, arrivals_[i], d_offload_[i]);
  }
  if (server_side) {
    for (std::size_t j = 0; j < S; ++j)
      for (std::size_t i = 0; i < U; ++i) {
        const auto& z = st_.pair[j][i];
        thr_server_[j][i] = z.avg_rate.mean * cfg_.servers[j].d_server_s;
        const double rmax =
            channel::max_rate(cfg_.ues[i].p_max_w, gains_[i][j], noise, net.bandwidth_hz);
        beta_server_[j][i] = queues::beta_server(z, tau * rmax, thr_server_[j][i]);
      }
    estimator_.record_slot(beta_offload_, beta_server_, assign_);
  }

  // Per-UE decisions; the heavy per-UE solver loop is the parallel kernel,
  // the serial path is the reference implementation.
  if (opts_.use_openmp) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < U; ++i) decide_ue(i);
  } else {
    for (std::size_t i = 0; i < U; ++i) decide_ue(i);
  }

  // Server core schedules.
  if (server_side) {
    std::vector<double> cycles(U);
    for (std::size_t i = 0; i < U; ++i) cycles[i] = cfg_.ues[i].cycles_per_bit;
    for (std::size_t j = 0; j < S; ++j)
      core_speed_[j] = allocation::schedule_cores(beta_server_[j], cycles,
                                                  cfg_.servers[j].core_count,
                                                  cfg_.servers[j].core_speed_hz);
  }

  // Uplink rates and observed interference at the serving server.
  std::vector<double> powers(U);
  for (std::size_t i = 0; i < U; ++i) powers[i] = alloc_[i].tx_power_w;
  for (std::size_t i = 0; i < U; ++i) {
    rate_[i] = 0.0;
    interf_obs_[i] = 0.0;
    const int j = assign_[i];
    if (j < 0) continue;
    rate_[i] = channel::rate(i, static_cast<std::size_t>(j), powers, assign_, gains_,
                             noise, net.bandwidth_hz);
    double interf = 0.0;
    for (std::size_t other = 0; other < U; ++other)
      if (other != i && assign_[other] == j)
        interf += powers[other] * gains_[other][static_cast<std::size_t>(j)];
    interf_obs_[i] = interf;
  }

  // Physical queue recursions into slot t+1.
  std::vector<double> q_offload_prev(U);
  for (std::size_t i = 0; i < U; ++i) q_offload_prev[i] = st_.ue[i].q_offload;

  for (std::size_t i = 0; i < U; ++i) {
    auto& q = st_.ue[i];
    auto& a = acc_[i];
    const double served_local = tau * alloc_[i].cpu_hz / cfg_.ues[i].cycles_per_bit;
    const double ql_next =
        queues::step_local_queue(q.q_local, split_[i].local_bits, alloc_[i].cpu_hz, tau,
                                 cfg_.ues[i].cycles_per_bit);
    a.dep_local += std::min(q.q_local + split_[i].local_bits, served_local);
    const double served_off = tau * rate_[i];
    const double qo_next =
        queues::step_offload_queue(q.q_offload, split_[i].offload_bits, served_off);
    a.dep_offload += std::min(q.q_offload + split_[i].offload_bits, served_off);
    q.q_local = ql_next;
    q.q_offload = qo_next;
  }
  if (server_side) {
    for (std::size_t j = 0; j < S; ++j)
      for (std::size_t i = 0; i < U; ++i) {
        auto& z = st_.pair[j][i];
        const double offered = q_offload_prev[i] + split_[i].offload_bits;
        const double tau_rate = assign_[i] == static_cast<int>(j) ? tau * rate_[i] : 0.0;
        const double service = tau * core_speed_[j][i] / cfg_.ues[i].cycles_per_bit;
        const double z_next =
            queues::step_server_queue(z.backlog, offered, tau_rate, service);
        acc_[i].dep_server += z.backlog + std::min(offered, tau_rate) - z_next;
        z.backlog = z_next;
      }
  }

  // Moving averages now cover slot t; the slot-(t+1) indicators below use
  // the updated values.
  for (std::size_t i = 0; i < U; ++i) {
    st_.ue[i].avg_arrival_local.add(split_[i].local_bits);
    st_.ue[i].avg_arrival_offload.add(split_[i].offload_bits);
  }
  if (server_side)
    for (std::size_t j = 0; j < S; ++j)
      for (std::size_t i = 0; i < U; ++i)
        st_.pair[j][i].avg_rate.add(assign_[i] == static_cast<int>(j) ? rate_[i] : 0.0);

  // Virtual queues and violation counters on the slot-(t+1) state.
  for (std::size_t i = 0; i < U; ++i) {
    const UeProfile& up = cfg_.ues[i];
    auto& q = st_.ue[i];
    const double d_loc_next =
        queues::dynamic_threshold(up.d_local_multiplier, q.avg_arrival_local);
    const double d_off_next =
        queues::dynamic_threshold(up.d_offload_multiplier, q.avg_arrival_offload);
    queues::TailConstraint local{evt::constraint_targets(up.sigma_local_th, up.xi_local_th),
                                 up.eps_local};
    queues::TailConstraint offload{
        evt::constraint_targets(up.sigma_offload_th, up.xi_offload_th), up.eps_offload};
    queues::step_ue_virtual_queues(q, q.q_local, q.q_offload, d_loc_next, d_off_next,
                                   local, offload);
    auto& a = acc_[i];
    if (q.q_local > d_loc_next) ++a.viol_local;
    if (q.q_offload > d_off_next) ++a.viol_offload;
  }
  if (server_side) {
    for (std::size_t j = 0; j < S; ++j) {
      const ServerProfile& sp = cfg_.servers[j];
      queues::TailConstraint c{evt::constraint_targets(sp.sigma_server_th, sp.xi_server_th),
                               sp.eps_server};
      for (std::size_t i = 0; i < U; ++i) {
        auto& z = st_.pair[j][i];
        const double thr_next = z.avg_rate.mean * sp.d_server_s;
        queues::step_server_virtual_queues(z, z.backlog, thr_next, c);
        if (z.backlog > thr_next) ++viol_pair_[j][i];
      }
    }
    // Interference statistics for the next slot's solver.
    for (std::size_t i = 0; i < U; ++i)
      if (assign_[i] >= 0)
        st_.hist[i][static_cast<std::size_t>(assign_[i])].observe(interf_obs_[i]);
  }

  // Metrics over the slot-(t+1) state.
  for (std::size_t i = 0; i < U; ++i) {
    auto& a = acc_[i];
    const auto& q = st_.ue[i];
    a.sum_q_local += q.q_local;
    a.sum_q_offload += q.q_offload;
    if (server_side)
      for (std::size_t j = 0; j < S; ++j) a.sum_z += st_.pair[j][i].backlog;
    const double f = alloc_[i].cpu_hz;
    a.sum_p_comp += cfg_.ues[i].kappa * f * f * f;
    a.sum_p_tx += alloc_[i].tx_power_w;
    a.samples_local.push_back(q.q_local);
    a.samples_offload.push_back(q.q_offload);
  }

  const std::int64_t next_slot = st_.clock.slot + 1;
  if (next_slot % vq_interval_ == 0 || next_slot == cfg_.net.horizon_slots) {
    VqSnapshot snap;
    snap.slot = next_slot;
    snap.values.reserve(U * 6 + (server_side ? S * U * 3 : 0));
    for (std::size_t i = 0; i < U; ++i) {
      const auto& q = st_.ue[i];
      snap.values.insert(snap.values.end(),
                         {q.vq_local_excess_mean, q.vq_local_excess_sq,
                          q.vq_offload_excess_mean, q.vq_offload_excess_sq,
                          q.vq_local_violation, q.vq_offload_violation});
    }
    if (server_side)
      for (std::size_t j = 0; j < S; ++j)
        for (std::size_t i = 0; i < U; ++i) {
          const auto& z = st_.pair[j][i];
          snap.values.insert(snap.values.end(),
                             {z.vq_excess_mean, z.vq_excess_sq, z.vq_violation});
        }
    vq_snapshots_.push_back(std::move(snap));
  }

  st_.clock = advance_clock(st_.clock);
}

namespace {

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(v.size())));
  return v[std::min(rank == 0 ? 0 : rank - 1, v.size() - 1)];
}

void exceedance_stats(const std::vector<double>& samples, double threshold,
                      double* mean, double* stddev) {
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (double x : samples)
    if (x > threshold) {
      const double e = x - threshold;
      sum += e;
      sum2 += e * e;
      ++n;
    }
  if (n == 0) {
    *mean = 0.0;
    *stddev = 0.0;
    return;
  }
  *mean = sum / static_cast<double>(n);
  const double var = std::max(sum2 / static_cast<double>(n) - *mean * *mean, 0.0);
  *stddev = std::sqrt(var);
}

}  // namespace

MetricsRecord Simulation::finalize() const {
  MetricsRecord r;
  const std::size_t U = st_.num_ues();
  const std::size_t S = st_.num_servers();
  const std::int64_t T = st_.clock.slot;
  const double tau = cfg_.net.slot_s;

  r.policy = policy_name(opts_.policy);
  r.seed = cfg_.net.rng_seed;
  r.num_ues = static_cast<int>(U);
  r.num_servers = static_cast<int>(S);
  r.lambda_bps = cfg_.ues.empty() ? 0.0 : cfg_.ues[0].arrival_rate_bps;
  r.cycles_per_bit = cfg_.ues.empty() ? 0.0 : cfg_.ues[0].cycles_per_bit;
  r.tradeoff_v = cfg_.net.tradeoff_v;
  r.horizon = T;
  r.matching_frames = matching_frames_;
  r.matching_converged = matching_converged_;
  r.vq_snapshots = vq_snapshots_;

  double zeta_num = 0.0, zeta_den = 0.0, power_sum = 0.0;
  std::int64_t viol_local = 0, viol_offload = 0, viol_pair_total = 0;
  std::int64_t viol_fixed = 0, fixed_events = 0;

  r.ue.resize(U);
  r.offload_exceedances.resize(U);
  for (std::size_t i = 0; i < U; ++i) {
    const auto& a = acc_[i];
    UeMetrics& m = r.ue[i];
    const double dl = littles_delay_s(a.sum_q_local, a.dep_local, T, tau);
    const double doq = littles_delay_s(a.sum_q_offload, a.dep_offload, T, tau);
    const double dz = littles_delay_s(a.sum_z, a.dep_server, T, tau);
    m.delay_local_s = dl;
    m.delay_offload_s = doq + tau + dz;
    const double w_local = st_.ue[i].avg_arrival_local.mean;
    const double w_off = st_.ue[i].avg_arrival_offload.mean;
    if (w_local + w_off > 0.0)
      m.delay_s = (w_local * m.delay_local_s + w_off * m.delay_offload_s) /
                  (w_local + w_off);
    m.delay_finite = std::isfinite(m.delay_s);
    m.q99_local_bits = percentile(a.samples_local, 0.99);
    m.q99_offload_bits = percentile(a.samples_offload, 0.99);
    exceedance_stats(a.samples_local, m.q99_local_bits, &m.exc_mean_local,
                     &m.exc_std_local);
    exceedance_stats(a.samples_offload, m.q99_offload_bits, &m.exc_mean_offload,
                     &m.exc_std_offload);
    if (w_local > 0.0) {
      m.zeta = w_off / w_local;
    } else {
      m.zeta = w_off > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    zeta_num += w_off;
    zeta_den += w_local;
    m.avg_power_comp_w = a.sum_p_comp / static_cast<double>(T);
    m.avg_power_tx_w = a.sum_p_tx / static_cast<double>(T);
    power_sum += m.avg_power_comp_w + m.avg_power_tx_w;
    m.viol_freq_local = static_cast<double>(a.viol_local) / static_cast<double>(T);
    m.viol_freq_offload = static_cast<double>(a.viol_offload) / static_cast<double>(T);
    viol_local += a.viol_local;
    viol_offload += a.viol_offload;
    for (std::size_t j = 0; j < S; ++j) {
      m.viol_freq_server_max =
          std::max(m.viol_freq_server_max,
                   static_cast<double>(viol_pair_[j][i]) / static_cast<double>(T));
      viol_pair_total += viol_pair_[j][i];
    }
    m.final_server = assign_[i];
    if (assign_[i] >= 0) {
      const double snr = cfg_.ues[i].p_max_w *
                         st_.mean_gains[i][static_cast<std::size_t>(assign_[i])] /
                         cfg_.net.noise_w();
      m.snr_db = linear_to_db(snr);
    } else {
      m.snr_db = std::numeric_limits<double>::quiet_NaN();
    }

    // Peaks over the converged threshold (a fixed high threshold, as the
    // Pickands-Balkema-de Haan approximation assumes).
    if (opts_.record_exceedances) {
      const double fixed_thr =
          cfg_.ues[i].d_offload_multiplier * st_.ue[i].avg_arrival_offload.mean;
      auto& trace = r.offload_exceedances[i];
      const auto start = static_cast<std::size_t>(
          std::min<std::int64_t>(opts_.exceedance_warmup, T));
      for (std::size_t s = start; s < a.samples_offload.size(); ++s) {
        ++fixed_events;
        if (fixed_thr > 0.0 && a.samples_offload[s] > fixed_thr) {
          trace.push_back(a.samples_offload[s] - fixed_thr);
          ++viol_fixed;
        }
      }
    }
  }

  if (zeta_den > 0.0) {
    r.zeta_pooled = zeta_num / zeta_den;
  } else {
    r.zeta_pooled = zeta_num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  r.avg_power_total_w = power_sum / static_cast<double>(U);
  const double events = static_cast<double>(T) * static_cast<double>(U);
  r.viol_freq_local_pooled = static_cast<double>(viol_local) / events;
  r.viol_freq_offload_pooled = static_cast<double>(viol_offload) / events;
  r.viol_freq_server_pooled =
      static_cast<double>(viol_pair_total) / (events * static_cast<double>(S));
  r.viol_freq_offload_fixed_pooled =
      fixed_events > 0 ? static_cast<double>(viol_fixed) / static_cast<double>(fixed_events)
                       : 0.0;
  return r;
}

MetricsRecord Simulation::run() {
  while (st_.clock.slot < cfg_.net.horizon_slots) step();
  return finalize();
}

MetricsRecord run_simulation(const SimConfig& cfg, const EngineOptions& opts) {
  Simulation sim(cfg, opts);
  return sim.run();
}

}  // namespace mecsim::engine
