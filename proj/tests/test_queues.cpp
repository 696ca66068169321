#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mecsim/queues.hpp"
#include "mecsim/rng.hpp"

using namespace mecsim;
using namespace mecsim::queues;

TEST_CASE("local queue recursion") {
  CHECK(step_local_queue(0.0, 0.0, 5e9, 0.04, 8250.0) == 0.0);
  // 1 Mbit backlog served at 1 GHz for 40 ms at 8250 cycle/bit
  CHECK(step_local_queue(1e6, 0.0, 1e9, 0.04, 8250.0) ==
        doctest::Approx(1e6 - 0.04e9 / 8250.0));
  CHECK(step_local_queue(1e6, 0.0, 1e9, 0.04, 8250.0) == doctest::Approx(995151.5).epsilon(1e-6));
  // over-service clamps at zero
  CHECK(step_local_queue(100.0, 50.0, 1e12, 0.04, 1.0) == 0.0);
}

TEST_CASE("offload queue recursion") {
  CHECK(step_offload_queue(0.0, 0.0, 123.0) == 0.0);
  CHECK(step_offload_queue(5e5, 6e4, 4e5) == doctest::Approx(1.6e5));
  CHECK(step_offload_queue(10.0, 0.0, 100.0) == 0.0);
}

TEST_CASE("server queue recursion clamps arrivals by the uplink") {
  CHECK(step_server_queue(0.0, 0.0, 0.0, 0.0) == 0.0);
  // offered 1e4 bits, uplink can carry 4e5, one core serves 4.85e4
  const double service = 0.04 * 1e10 / 8250.0;
  CHECK(step_server_queue(0.0, 1e4, 4e5, service) == 0.0);
  // uplink-limited: offered large, only tau*R arrives
  CHECK(step_server_queue(0.0, 1e9, 4e5, 0.0) == doctest::Approx(4e5));
}

TEST_CASE("upper-bound recursion dominates the true server queue") {
  RngStream rng(11, 2);
  double z = 0.0, z_up = 0.0;
  for (int t = 0; t < 5000; ++t) {
    const double offered = rng.exponential() * 1e4;
    const double tau_rate = rng.exponential() * 2e4;
    const double service = rng.exponential() * 1.5e4;
    z = step_server_queue(z, offered, tau_rate, service);
    z_up = step_server_queue_upper(z_up, tau_rate, service);
    CHECK(z <= z_up + 1e-9);
    CHECK(z >= 0.0);
    CHECK(z_up >= 0.0);
  }
}

TEST_CASE("excess values require strict exceedance") {
  CHECK_FALSE(excess_over(5.0, 5.0).has_value());
  const auto x = excess_over(105.0, 5.0);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(100.0));
  // server-side rule: Z at 1.5x the rate-scaled threshold
  const double rbar_d = 3e6;
  const auto xs = excess_over(1.5 * rbar_d, rbar_d);
  CHECK(*xs == doctest::Approx(0.5 * rbar_d));
}

TEST_CASE("violation queue drains by epsilon without exceedance") {
  UeQueues q;
  q.vq_local_violation = 0.5;
  TailConstraint c{evt::constraint_targets(40.0, 0.3), 0.01};
  // next-slot queues below their thresholds
  step_ue_virtual_queues(q, 1.0, 0.0, 10.0, 10.0, c, c);
  CHECK(q.vq_local_violation == doctest::Approx(0.49));
  CHECK(q.vq_offload_violation == 0.0);
  CHECK(q.vq_local_excess_mean == 0.0);  // untouched without exceedance
}

TEST_CASE("excess queues stay put without exceedance and clamp at zero") {
  UeQueues q;
  q.vq_local_excess_mean = 3.0;
  q.vq_local_excess_sq = 7.0;
  TailConstraint c{evt::constraint_targets(40.0, 0.3), 0.01};
  step_ue_virtual_queues(q, 1.0, 0.0, 10.0, 10.0, c, c);
  CHECK(q.vq_local_excess_mean == 3.0);
  CHECK(q.vq_local_excess_sq == 7.0);

  // exceedance with excess far below the drain targets decreases, clamped
  step_ue_virtual_queues(q, 11.0, 0.0, 10.0, 10.0, c, c);  // X = 1 << 57.14
  CHECK(q.vq_local_excess_mean == 0.0);
  CHECK(q.vq_local_excess_sq == 0.0);
  CHECK(q.vq_local_violation == doctest::Approx(0.99));
}

TEST_CASE("all-zero state stays zero without exceedances") {
  UeQueues q;
  TailConstraint c{evt::constraint_targets(40.0, 0.3), 0.01};
  const double inf = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) step_ue_virtual_queues(q, 0.0, 0.0, inf, inf, c, c);
  CHECK(q.vq_local_excess_mean == 0.0);
  CHECK(q.vq_local_excess_sq == 0.0);
  CHECK(q.vq_local_violation == 0.0);
  CHECK(q.vq_offload_violation == 0.0);
}

TEST_CASE("server virtual queues accumulate on exceedance") {
  ServerPairQueues z;
  TailConstraint c{evt::constraint_targets(10.0, 0.0), 0.01};  // drains 10, 200
  step_server_virtual_queues(z, 1015.0, 1000.0, c);            // X = 15, Y = 225
  CHECK(z.vq_excess_mean == doctest::Approx(5.0));
  CHECK(z.vq_excess_sq == doctest::Approx(25.0));
  CHECK(z.vq_violation == doctest::Approx(0.99));
}

TEST_CASE("beta weights follow the drift expansion") {
  UeQueues q;
  CHECK(beta_local(q, 0.0, 100.0) == 0.0);
  CHECK(beta_offload(q, 0.0, 100.0) == 0.0);

  q.q_local = 10.0;
  // indicator off: only violation queue + backlog survive
  CHECK(beta_local(q, 0.0, 100.0) == doctest::Approx(10.0));

  q.vq_local_excess_mean = 5.0;
  q.vq_local_excess_sq = 2.0;
  q.vq_local_violation = 1.0;
  // indicator on: (5 + 2*2*10 + 2*1000 + 10) + 1 + 10 = 2066
  CHECK(beta_local(q, 100.0, 50.0) == doctest::Approx(2066.0));

  ServerPairQueues z;
  CHECK(beta_server(z, 100.0, 50.0) == 0.0);
  z.backlog = 10.0;
  z.vq_excess_mean = 5.0;
  z.vq_excess_sq = 2.0;
  z.vq_violation = 1.0;
  CHECK(beta_server(z, 100.0, 50.0) == doctest::Approx(2066.0));
  // indicator off (threshold above backlog + tau Rmax)
  CHECK(beta_server(z, 100.0, 500.0) == doctest::Approx(11.0));
}

TEST_CASE("dynamic threshold is infinite before any sample") {
  MovingAverage avg;
  CHECK(std::isinf(dynamic_threshold(100.0, avg)));
  avg.add(40.0);
  CHECK(dynamic_threshold(100.0, avg) == doctest::Approx(4000.0));
}

TEST_CASE("moving average is the cumulative mean") {
  MovingAverage m;
  m.add(2.0);
  CHECK(m.mean == doctest::Approx(2.0));
  m.add(4.0);
  CHECK(m.mean == doctest::Approx(3.0));
  MovingAverage c;
  for (int t = 0; t < 50; ++t) c.add(7.0);
  CHECK(c.mean == doctest::Approx(7.0));
  CHECK(c.count == 50);
}

TEST_CASE("queues stay nonnegative under random traffic") {
  RngStream rng(4, 4);
  UeQueues q;
  TailConstraint c{evt::constraint_targets(100.0, 0.3), 0.01};
  double ql = 0.0, qo = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const double a = rng.exponential() * 500.0;
    ql = step_local_queue(ql, a, rng.exponential() * 1e8, 0.04, 8250.0);
    qo = step_offload_queue(qo, rng.exponential() * 500.0, rng.exponential() * 600.0);
    step_ue_virtual_queues(q, ql, qo, 300.0, 300.0, c, c);
    CHECK(ql >= 0.0);
    CHECK(qo >= 0.0);
    CHECK(q.vq_local_excess_mean >= 0.0);
    CHECK(q.vq_local_excess_sq >= 0.0);
    CHECK(q.vq_local_violation >= 0.0);
    CHECK(q.vq_offload_excess_mean >= 0.0);
    CHECK(q.vq_offload_excess_sq >= 0.0);
    CHECK(q.vq_offload_violation >= 0.0);
  }
}
