#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mecsim/common.hpp"
#include "mecsim/model.hpp"

using namespace mecsim;

namespace {

SimConfig table_config(int ues = 30, int servers = 4) {
  SimConfig cfg;
  cfg.net.num_ues = ues;
  cfg.net.num_servers = servers;
  cfg.ues.assign(static_cast<std::size_t>(ues), UeProfile{});
  cfg.servers.assign(static_cast<std::size_t>(servers), ServerProfile{});
  return cfg;
}

}  // namespace

TEST_CASE("clock frame arithmetic") {
  Clock c{99, 100};
  c = advance_clock(c);
  CHECK(c.slot == 100);
  CHECK(c.frame() == 2);
  CHECK(c.is_frame_boundary());

  Clock z{0, 100};
  CHECK(z.frame() == 1);
  CHECK(z.is_frame_boundary());
  z = advance_clock(z);
  CHECK(z.slot == 1);
  CHECK(z.frame() == 1);
  CHECK_FALSE(z.is_frame_boundary());

  Clock c2{199, 100};
  c2 = advance_clock(c2);
  CHECK(c2.slot == 200);
  CHECK(c2.frame() == 3);
  CHECK(c2.is_frame_boundary());

  for (std::int64_t t : {0L, 1L, 99L, 100L, 12345L}) {
    Clock k{t, 100};
    CHECK(k.frame() == t / 100 + 1);
  }
}

TEST_CASE("build_network produces an all-zero initial state") {
  const auto st = build_network(table_config());
  CHECK(st.num_ues() == 30);
  CHECK(st.num_servers() == 4);
  CHECK(st.clock.slot == 0);
  // four quadrant-center servers
  CHECK(st.server_positions[0].x == doctest::Approx(25.0));
  CHECK(st.server_positions[3].y == doctest::Approx(75.0));
  for (const auto& q : st.ue) {
    CHECK(q.q_local == 0.0);
    CHECK(q.q_offload == 0.0);
    CHECK(q.vq_local_excess_mean == 0.0);
    CHECK(q.avg_arrival_local.count == 0);
  }
  for (const auto& row : st.pair)
    for (const auto& z : row) {
      CHECK(z.backlog == 0.0);
      CHECK(z.avg_rate.count == 0);
    }
  for (const auto& row : st.mean_gains)
    for (double g : row) CHECK(g > 0.0);
}

TEST_CASE("minimal one-UE one-server network") {
  const auto st = build_network(table_config(1, 1));
  CHECK(st.num_ues() == 1);
  CHECK(st.num_servers() == 1);
  CHECK(st.ue[0].q_local == 0.0);
}

TEST_CASE("profile length mismatch is a configuration error") {
  SimConfig cfg = table_config();
  cfg.ues.pop_back();  // 29 profiles for 30 UEs
  CHECK_THROWS_AS(build_network(cfg), ConfigError);
}

TEST_CASE("rebuilding from the same seed is bit-identical") {
  const SimConfig cfg = table_config();
  const auto a = build_network(cfg);
  const auto b = build_network(cfg);
  REQUIRE(a.ue_positions.size() == b.ue_positions.size());
  for (std::size_t i = 0; i < a.ue_positions.size(); ++i) {
    CHECK(a.ue_positions[i].x == b.ue_positions[i].x);
    CHECK(a.ue_positions[i].y == b.ue_positions[i].y);
  }
  CHECK(a.mean_gains == b.mean_gains);
  CHECK(snapshot_text(a) == snapshot_text(b));
}

TEST_CASE("different seeds move the UEs") {
  SimConfig cfg = table_config();
  const auto a = build_network(cfg);
  cfg.net.rng_seed = 2;
  const auto b = build_network(cfg);
  CHECK(a.ue_positions[0].x != b.ue_positions[0].x);
}

TEST_CASE("snapshot round-trip restores every queue value") {
  auto st = build_network(table_config(3, 2));
  st.clock.slot = 17;
  st.ue[0].q_local = 123.456;
  st.ue[1].vq_offload_excess_sq = 9.75e12;
  st.ue[2].avg_arrival_local.add(4000.0);
  st.ue[2].avg_arrival_local.add(8000.0);
  st.pair[1][2].backlog = 3.25e5;
  st.pair[0][1].avg_rate.add(1.5e7);

  const std::string text = snapshot_text(st);
  auto other = build_network(table_config(3, 2));
  snapshot_restore(other, text);
  CHECK(snapshot_text(other) == text);
  CHECK(other.clock.slot == 17);
  CHECK(other.ue[0].q_local == 123.456);
  CHECK(other.ue[2].avg_arrival_local.mean == st.ue[2].avg_arrival_local.mean);
  CHECK(other.pair[1][2].backlog == 3.25e5);
}

TEST_CASE("beta weights recomputed from a snapshot are bit-identical") {
  auto st = build_network(table_config(2, 2));
  st.ue[0].q_local = 1.0e5 / 3.0;
  st.ue[0].vq_local_excess_mean = 7.1e3 / 7.0;
  st.ue[0].vq_local_excess_sq = 1.0 / 3.0 * 1e7;
  st.ue[0].vq_local_violation = 0.123456789012345;

  const double arrival = 4000.0;
  const double d = 1.0e5;  // indicator on
  const double before = queues::beta_local(st.ue[0], arrival, d);

  auto restored = build_network(table_config(2, 2));
  snapshot_restore(restored, snapshot_text(st));
  const double after = queues::beta_local(restored.ue[0], arrival, d);
  CHECK(before == after);  // exact
}

TEST_CASE("mobility refresh moves UEs and regenerates gains deterministically") {
  SimConfig cfg = table_config(5, 4);
  cfg.net.mobility = Mobility::kRefreshPerFrame;
  auto a = build_network(cfg);
  auto b = build_network(cfg);
  const auto before = a.ue_positions;
  refresh_ue_positions(a);
  refresh_ue_positions(b);
  CHECK(a.ue_positions[0].x != before[0].x);
  for (std::size_t i = 0; i < a.ue_positions.size(); ++i)
    CHECK(a.ue_positions[i].x == b.ue_positions[i].x);
  CHECK(a.mean_gains == b.mean_gains);
}

TEST_CASE("explicit positions are honored and validated") {
  SimConfig cfg = table_config(2, 1);
  cfg.net.server_positions = {{50.0, 50.0}};
  cfg.net.ue_positions = {{10.0, 10.0}, {90.0, 90.0}};
  const auto st = build_network(cfg);
  CHECK(st.ue_positions[0].x == 10.0);

  cfg.net.ue_positions[1].x = 101.0;  // outside the area
  CHECK_THROWS_AS(build_network(cfg), ConfigError);
}
