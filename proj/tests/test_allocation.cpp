#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "mecsim/allocation.hpp"
#include "mecsim/rng.hpp"

using namespace mecsim;
using namespace mecsim::allocation;

namespace {

struct PointMass {
  std::vector<double> probs{1.0};
  std::vector<double> values{0.0};
};

SolverInputs base_inputs(PointMass& pm) {
  SolverInputs in;
  in.interf_probs = pm.probs;
  in.interf_values = pm.values;
  in.tau_s = 0.04;
  in.bandwidth_hz = 10e6;
  in.noise_w = 4e-14;
  in.cycles_per_bit = 8250.0;
  in.kappa = 1e-27;
  in.p_max_w = 1.0;
  in.tradeoff_v = 0.0;
  return in;
}

// Objective of the per-UE subproblem (to minimize), evaluated directly.
double objective(const SolverInputs& in, double f, double p) {
  double erate = 0.0;
  for (std::size_t b = 0; b < in.interf_probs.size(); ++b)
    erate += in.interf_probs[b] *
             std::log2(1.0 + p * in.gain / (in.noise_w + in.interf_values[b]));
  return (in.beta_server - in.beta_offload) * in.tau_s * in.bandwidth_hz * erate -
         in.beta_local * in.tau_s * f / in.cycles_per_bit +
         in.tradeoff_v * (in.kappa * f * f * f + p);
}

// Independent oracle: exhaustive grid over the feasible (f, P) box.
double grid_best_objective(const SolverInputs& in, int n = 400) {
  const double f_max = std::cbrt(in.p_max_w / in.kappa);
  double best = objective(in, 0.0, 0.0);
  for (int a = 0; a <= n; ++a) {
    const double f = f_max * a / n;
    const double p_room = in.p_max_w - in.kappa * f * f * f;
    if (p_room < 0.0) continue;
    for (int b = 0; b <= n; ++b) {
      const double p = p_room * b / n;
      best = std::min(best, objective(in, f, p));
    }
  }
  return best;
}

double budget_use(const SolverInputs& in, const UeAllocation& a) {
  return in.kappa * a.cpu_hz * a.cpu_hz * a.cpu_hz + a.tx_power_w;
}

void check_kkt(const SolverInputs& in, const UeAllocation& a) {
  CHECK(a.cpu_hz >= 0.0);
  CHECK(a.tx_power_w >= 0.0);
  CHECK(budget_use(in, a) <= in.p_max_w + 1e-9);
  const double x = in.tradeoff_v + a.gamma;
  if (a.cpu_hz > 0.0) {
    const double residual =
        3.0 * in.kappa * x * a.cpu_hz * a.cpu_hz - in.beta_local * in.tau_s / in.cycles_per_bit;
    CHECK(std::abs(residual) <= 1e-8 * in.beta_local * in.tau_s / in.cycles_per_bit);
  }
  if (a.tx_power_w > 0.0) {
    const double residual = marginal_rate_value(a.tx_power_w, in) - x;
    CHECK(std::abs(residual) <= 1e-8 * x);
  }
  if (a.gamma > 0.0)
    CHECK(std::abs(budget_use(in, a) - in.p_max_w) <= 1e-6 * in.p_max_w);
}

}  // namespace

TEST_CASE("marginal rate value") {
  PointMass pm;
  SolverInputs in = base_inputs(pm);
  in.beta_offload = 2.0;
  in.beta_server = 1.0;
  in.gain = 1e-10;

  // point mass at zero interference reduces to the closed form
  const double expect =
      (2.0 - 1.0) * 0.04 * 10e6 * 1e-10 / ((4e-14 + 0.5 * 1e-10) * std::log(2.0));
  CHECK(marginal_rate_value(0.5, in) == doctest::Approx(expect).epsilon(1e-12));

  // strictly decreasing in P
  double prev = marginal_rate_value(0.0, in);
  for (double p = 0.01; p <= 1.0; p += 0.01) {
    const double m = marginal_rate_value(p, in);
    CHECK(m < prev);
    prev = m;
  }

  // two-bin histogram, hand-computed weighted sum
  std::vector<double> probs{0.5, 0.5};
  std::vector<double> values{0.0, 4e-14};
  in.interf_probs = probs;
  in.interf_values = values;
  const double k = 1.0 * 0.04 * 10e6 * 1e-10 / std::log(2.0);
  const double hand = k * (0.5 / (4e-14 + 1e-11) + 0.5 / (8e-14 + 1e-11));
  CHECK(marginal_rate_value(0.1, in) == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("solver trivial activation conditions") {
  PointMass pm;
  SolverInputs in = base_inputs(pm);
  in.gain = 1e-10;

  // no local pressure: f = 0
  in.beta_local = 0.0;
  in.beta_offload = 5.0;
  in.beta_server = 1.0;
  auto a = solve_ue_allocation(in);
  CHECK(a.cpu_hz == 0.0);
  check_kkt(in, a);

  // offloading worthless: P = 0
  in.beta_local = 1e6;
  in.beta_offload = 1.0;
  in.beta_server = 2.0;
  a = solve_ue_allocation(in);
  CHECK(a.tx_power_w == 0.0);
  CHECK(a.cpu_hz > 0.0);
  check_kkt(in, a);

  // nothing to do at all
  in.beta_local = 0.0;
  a = solve_ue_allocation(in);
  CHECK(a.cpu_hz == 0.0);
  CHECK(a.tx_power_w == 0.0);
}

TEST_CASE("solver matches the grid oracle on the reference instance") {
  // beta_local = 1e6 bit-scale, rate weight 1e6, deterministic I = 0,
  // h/(N0 W) = 1e3 per watt, V = 0.
  PointMass pm;
  SolverInputs in = base_inputs(pm);
  in.beta_local = 1e6;
  in.beta_offload = 1e6;
  in.beta_server = 0.0;
  in.gain = 1e3 * in.noise_w;

  const auto a = solve_ue_allocation(in);
  check_kkt(in, a);
  // V = 0 with positive weights: the budget must bind
  CHECK(std::abs(budget_use(in, a) - 1.0) <= 1e-6);

  const double got = objective(in, a.cpu_hz, a.tx_power_w);
  const double oracle = grid_best_objective(in);
  CHECK(got <= oracle + 1e-3 * std::abs(oracle));
}

TEST_CASE("solver matches the grid oracle across random instances") {
  RngStream rng(2024, 1);
  PointMass pm;
  for (int inst = 0; inst < 15; ++inst) {
    SolverInputs in = base_inputs(pm);
    in.beta_local = rng.uniform() < 0.2 ? 0.0 : std::pow(10.0, 4.0 + 10.0 * rng.uniform());
    in.beta_offload = std::pow(10.0, 4.0 + 10.0 * rng.uniform());
    in.beta_server = rng.uniform() < 0.3 ? 2.0 * in.beta_offload : 0.0;
    in.gain = std::pow(10.0, -13.0 + 4.0 * rng.uniform());
    in.tradeoff_v = rng.uniform() < 0.5 ? 0.0 : std::pow(10.0, 10.0 * rng.uniform());
    std::vector<double> values{0.0, in.noise_w * (0.1 + 10.0 * rng.uniform())};
    std::vector<double> probs{0.6, 0.4};
    in.interf_probs = probs;
    in.interf_values = values;

    const auto a = solve_ue_allocation(in);
    check_kkt(in, a);

    SolverInputs oracle_in = in;  // oracle uses the same two-bin histogram
    const double got = objective(oracle_in, a.cpu_hz, a.tx_power_w);
    const double best = grid_best_objective(oracle_in);
    if (best != 0.0) {
      CHECK(got <= best + 1e-3 * std::abs(best));
    } else {
      CHECK(got <= 1e-12);
    }
  }
}

TEST_CASE("budget use is nonincreasing in the tradeoff parameter") {
  PointMass pm;
  SolverInputs in = base_inputs(pm);
  in.beta_local = 3e17;
  in.beta_offload = 5e17;
  in.beta_server = 0.0;
  in.gain = 2e-10;
  double prev = 2.0;
  for (double v : {0.0, 1e15, 1e16, 1e17, 1e18, 1e19, 1e20}) {
    in.tradeoff_v = v;
    const auto a = solve_ue_allocation(in);
    check_kkt(in, a);
    const double use = budget_use(in, a);
    CHECK(use <= prev + 1e-9);
    prev = use;
  }
}

TEST_CASE("task split rule") {
  const auto local = split_tasks(12000.0, 5.0, 5.0);
  CHECK(local.local_bits == 12000.0);  // equality goes local
  CHECK(local.offload_bits == 0.0);

  const auto off = split_tasks(12000.0, 6.0, 5.0);
  CHECK(off.local_bits == 0.0);
  CHECK(off.offload_bits == 12000.0);

  const auto none = split_tasks(0.0, 1.0, 2.0);
  CHECK(none.local_bits == 0.0);
  CHECK(none.offload_bits == 0.0);

  // conservation across random weights
  RngStream rng(8, 8);
  for (int k = 0; k < 100; ++k) {
    const double a = 12000.0 * rng.poisson(2.0);
    const auto s = split_tasks(a, rng.uniform(), rng.uniform());
    CHECK(s.local_bits + s.offload_bits == a);
  }
}

TEST_CASE("core schedule") {
  const std::vector<double> cycles{8250.0, 8250.0, 2640.0, 8250.0};

  std::vector<double> beta{0.0, 0.0, 0.0, 0.0};
  auto speeds = schedule_cores(beta, cycles, 8, 1e10);
  for (double s : speeds) CHECK(s == 0.0);

  beta = {1.0, 2.0, 3.0, 0.0};
  speeds = schedule_cores(beta, cycles, 8, 1e10);
  CHECK(speeds[0] == 1e10);
  CHECK(speeds[1] == 1e10);
  CHECK(speeds[2] == 1e10);
  CHECK(speeds[3] == 0.0);  // zero weight never scheduled

  // capacity 1: highest beta/L wins (UE 2: 3/2640 > 2/8250)
  speeds = schedule_cores(beta, cycles, 1, 1e10);
  CHECK(speeds[2] == 1e10);
  CHECK(speeds[0] + speeds[1] + speeds[3] == 0.0);

  // tie on beta/L: lower index first
  const std::vector<double> cyc2{100.0, 100.0};
  const std::vector<double> b2{5.0, 5.0};
  speeds = schedule_cores(b2, cyc2, 1, 1e10);
  CHECK(speeds[0] == 1e10);
  CHECK(speeds[1] == 0.0);
}

TEST_CASE("greedy schedule equals exhaustive subset maximization") {
  RngStream rng(77, 2);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t u = 2 + rng.raw() % 9;  // up to 10 UEs
    const int cores = 1 + static_cast<int>(rng.raw() % 4);
    std::vector<double> beta(u), cycles(u);
    for (std::size_t i = 0; i < u; ++i) {
      beta[i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform() * 1e6;
      cycles[i] = 1000.0 + rng.uniform() * 30000.0;
    }
    const auto speeds = schedule_cores(beta, cycles, cores, 1e10);
    double got = 0.0;
    for (std::size_t i = 0; i < u; ++i) got += beta[i] * speeds[i] / cycles[i];

    // enumerate every subset of size <= cores
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << u); ++mask) {
      if (std::popcount(mask) > cores) continue;
      double val = 0.0;
      for (std::size_t i = 0; i < u; ++i)
        if (mask & (1ULL << i)) val += beta[i] * 1e10 / cycles[i];
      best = std::max(best, val);
    }
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
}
