#include "mecsim/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mecsim::allocation {

namespace {

constexpr double kBudgetRelTol = 1e-6;    // |kappa f^3 + P - P_max| target
constexpr double kStationRelTol = 1e-10;  // Newton residual, relative to V+gamma
constexpr int kMaxIter = 300;

double rate_weight(const SolverInputs& in) { return in.beta_offload - in.beta_server; }

// Newton solve of marginal_rate_value(P) = target from P = 0; the marginal is
// decreasing and convex in P, so iterates increase monotonically toward the
// root. Returns 0 when already below target at P = 0.
double solve_power(double target, const SolverInputs& in) {
  double p = 0.0;
  double g = marginal_rate_value(p, in) - target;
  if (g <= 0.0) return 0.0;
  const double w = rate_weight(in);
  const double k = w * in.tau_s * in.bandwidth_hz * in.gain / std::log(2.0);
  for (int it = 0; it < kMaxIter && std::abs(g) > kStationRelTol * target; ++it) {
    double slope = 0.0;
    for (std::size_t b = 0; b < in.interf_probs.size(); ++b) {
      if (in.interf_probs[b] == 0.0) continue;
      const double den = in.noise_w + in.interf_values[b] + p * in.gain;
      slope -= in.interf_probs[b] * k * in.gain / (den * den);
    }
    if (slope == 0.0) break;
    const double next = p - g / slope;
    if (!(next > p)) break;  // stalled at rounding precision
    p = next;
    g = marginal_rate_value(p, in) - target;
  }
  return p;
}

}  // namespace

double marginal_rate_value(double p_w, const SolverInputs& in) {
  const double k = rate_weight(in) * in.tau_s * in.bandwidth_hz * in.gain / std::log(2.0);
  double sum = 0.0;
  for (std::size_t b = 0; b < in.interf_probs.size(); ++b) {
    if (in.interf_probs[b] == 0.0) continue;
    sum += in.interf_probs[b] / (in.noise_w + in.interf_values[b] + p_w * in.gain);
  }
  return k * sum;
}

UeAllocation solve_ue_allocation(const SolverInputs& in) {
  UeAllocation out;
  const double v = in.tradeoff_v;
  const bool want_cpu = in.beta_local > 0.0;
  const bool want_tx = rate_weight(in) > 0.0 && in.gain > 0.0;

  if (!want_cpu && !want_tx) {
    // Nothing has positive marginal value; (0, 0) is optimal.
    out.alpha2 = std::max(v - marginal_rate_value(0.0, in), 0.0);
    return out;
  }

  // f*(x) = sqrt(cf / x) with x = V + gamma.
  const double cf = in.beta_local * in.tau_s / (3.0 * in.cycles_per_bit * in.kappa);
  const auto cpu_of = [&](double x) { return want_cpu ? std::sqrt(cf / x) : 0.0; };
  const auto usage_of = [&](double x, double p) {
    const double f = cpu_of(x);
    return in.kappa * f * f * f + p;
  };

  // Interior solution at gamma = 0 (only possible for V > 0).
  if (v > 0.0) {
    const double p0 = want_tx ? solve_power(v, in) : 0.0;
    if (usage_of(v, p0) <= in.p_max_w) {
      out.cpu_hz = cpu_of(v);
      out.tx_power_w = p0;
      out.gamma = 0.0;
      if (p0 == 0.0) out.alpha2 = std::max(v - marginal_rate_value(0.0, in), 0.0);
      return out;
    }
  }

  // Budget binds. Without transmit value the multiplier has a closed form
  // from kappa f^3 = P_max.
  if (!want_tx) {
    out.cpu_hz = std::cbrt(in.p_max_w / in.kappa);
    out.gamma = cf * std::pow(in.kappa / in.p_max_w, 2.0 / 3.0) - v;
    out.alpha2 = std::max(v + out.gamma - marginal_rate_value(0.0, in), 0.0);
    return out;
  }
  if (!want_cpu) {
    out.tx_power_w = in.p_max_w;
    out.gamma = marginal_rate_value(in.p_max_w, in) - v;
    return out;
  }

  // Both resources carry value: bisect x = V + gamma in log space. Both
  // x -> kappa f(x)^3 and x -> P(x) are decreasing, and each bind point is a
  // valid lower bracket.
  const double x_cpu_bind = cf * std::pow(in.kappa / in.p_max_w, 2.0 / 3.0);
  const double x_tx_bind = marginal_rate_value(in.p_max_w, in);
  double lo = std::max({v, x_cpu_bind, x_tx_bind});
  double hi = lo;
  double p_hi = solve_power(hi, in);
  for (int it = 0; it < kMaxIter && usage_of(hi, p_hi) > in.p_max_w; ++it) {
    hi *= 2.0;
    p_hi = solve_power(hi, in);
  }
  for (int it = 0; it < kMaxIter; ++it) {
    if (usage_of(hi, p_hi) >= in.p_max_w * (1.0 - kBudgetRelTol)) break;
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;  // bracket at rounding precision
    const double p_mid = solve_power(mid, in);
    if (usage_of(mid, p_mid) >= in.p_max_w) {
      lo = mid;
    } else {
      hi = mid;
      p_hi = p_mid;
    }
  }
  out.cpu_hz = cpu_of(hi);
  out.tx_power_w = p_hi;
  out.gamma = hi - v;
  return out;
}

TaskSplit split_tasks(double arrival_bits, double beta_local, double beta_offload) {
  if (beta_local <= beta_offload) return {arrival_bits, 0.0};
  return {0.0, arrival_bits};
}

std::vector<double> schedule_cores(std::span<const double> beta_server,
                                   std::span<const double> cycles_per_bit,
                                   int core_count, double core_speed_hz) {
  std::vector<double> speeds(beta_server.size(), 0.0);
  std::vector<std::size_t> ues;
  for (std::size_t i = 0; i < beta_server.size(); ++i)
    if (beta_server[i] > 0.0) ues.push_back(i);
  std::sort(ues.begin(), ues.end(), [&](std::size_t a, std::size_t b) {
    const double ra = beta_server[a] / cycles_per_bit[a];
    const double rb = beta_server[b] / cycles_per_bit[b];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  const std::size_t granted = std::min<std::size_t>(ues.size(), static_cast<std::size_t>(core_count));
  for (std::size_t k = 0; k < granted; ++k) speeds[ues[k]] = core_speed_hz;
  return speeds;
}

}  // namespace mecsim::allocation
