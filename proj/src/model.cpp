#include "mecsim/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mecsim/common.hpp"

namespace mecsim {

namespace {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void append(std::string& out, const char* name, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %.17g\n", name, v);
  out += buf;
}

}  // namespace

void recompute_mean_gains(NetworkState& state) {
  const std::size_t U = state.ue_positions.size();
  const std::size_t S = state.server_positions.size();
  state.mean_gains.assign(U, std::vector<double>(S, 0.0));
  for (std::size_t i = 0; i < U; ++i)
    for (std::size_t j = 0; j < S; ++j)
      state.mean_gains[i][j] = channel::mean_gain(
          distance(state.ue_positions[i], state.server_positions[j]), state.cfg.net.carrier_ghz);
}

NetworkState build_network(const SimConfig& cfg) {
  validate(cfg);
  NetworkState st;
  st.cfg = cfg;
  st.clock = Clock{0, cfg.net.frame_slots};
  st.position_rng = RngStream(cfg.net.rng_seed, kStreamPositions);

  const auto U = static_cast<std::size_t>(cfg.net.num_ues);
  const auto S = static_cast<std::size_t>(cfg.net.num_servers);
  const double side = cfg.net.area_side_m;

  if (!cfg.net.server_positions.empty()) {
    st.server_positions = cfg.net.server_positions;
  } else if (S == 4) {
    st.server_positions = {{side * 0.25, side * 0.25},
                           {side * 0.75, side * 0.25},
                           {side * 0.25, side * 0.75},
                           {side * 0.75, side * 0.75}};
  } else {
    st.server_positions.resize(S);
    for (auto& p : st.server_positions)
      p = {st.position_rng.uniform_range(0.0, side), st.position_rng.uniform_range(0.0, side)};
  }

  if (!cfg.net.ue_positions.empty()) {
    st.ue_positions = cfg.net.ue_positions;
  } else {
    st.ue_positions.resize(U);
    for (auto& p : st.ue_positions)
      p = {st.position_rng.uniform_range(0.0, side), st.position_rng.uniform_range(0.0, side)};
  }

  recompute_mean_gains(st);

  st.ue.assign(U, queues::UeQueues{});
  st.pair.assign(S, std::vector<queues::ServerPairQueues>(U));
  st.hist.assign(U, std::vector<channel::InterferenceHistogram>(
                        S, channel::InterferenceHistogram(cfg.net.noise_w())));
  return st;
}

void refresh_ue_positions(NetworkState& state) {
  const double side = state.cfg.net.area_side_m;
  for (auto& p : state.ue_positions)
    p = {state.position_rng.uniform_range(0.0, side),
         state.position_rng.uniform_range(0.0, side)};
  recompute_mean_gains(state);
}

std::string snapshot_text(const NetworkState& state) {
  std::string out;
  out += "slot " + std::to_string(state.clock.slot) + "\n";
  for (std::size_t i = 0; i < state.num_ues(); ++i) {
    const auto& q = state.ue[i];
    out += "ue " + std::to_string(i) + "\n";
    append(out, "q_local", q.q_local);
    append(out, "q_offload", q.q_offload);
    append(out, "vq_local_excess_mean", q.vq_local_excess_mean);
    append(out, "vq_local_excess_sq", q.vq_local_excess_sq);
    append(out, "vq_offload_excess_mean", q.vq_offload_excess_mean);
    append(out, "vq_offload_excess_sq", q.vq_offload_excess_sq);
    append(out, "vq_local_violation", q.vq_local_violation);
    append(out, "vq_offload_violation", q.vq_offload_violation);
    append(out, "avg_arrival_local", q.avg_arrival_local.mean);
    append(out, "avg_arrival_local_n", static_cast<double>(q.avg_arrival_local.count));
    append(out, "avg_arrival_offload", q.avg_arrival_offload.mean);
    append(out, "avg_arrival_offload_n", static_cast<double>(q.avg_arrival_offload.count));
  }
  for (std::size_t j = 0; j < state.num_servers(); ++j)
    for (std::size_t i = 0; i < state.num_ues(); ++i) {
      const auto& z = state.pair[j][i];
      out += "pair " + std::to_string(j) + " " + std::to_string(i) + "\n";
      append(out, "backlog", z.backlog);
      append(out, "vq_excess_mean", z.vq_excess_mean);
      append(out, "vq_excess_sq", z.vq_excess_sq);
      append(out, "vq_violation", z.vq_violation);
      append(out, "avg_rate", z.avg_rate.mean);
      append(out, "avg_rate_n", static_cast<double>(z.avg_rate.count));
    }
  return out;
}

void snapshot_restore(NetworkState& state, const std::string& text) {
  std::istringstream in(text);
  std::string key;
  queues::UeQueues* ue = nullptr;
  queues::ServerPairQueues* pr = nullptr;
  while (in >> key) {
    if (key == "slot") {
      in >> state.clock.slot;
    } else if (key == "ue") {
      std::size_t i;
      in >> i;
      ue = &state.ue.at(i);
      pr = nullptr;
    } else if (key == "pair") {
      std::size_t j, i;
      in >> j >> i;
      pr = &state.pair.at(j).at(i);
      ue = nullptr;
    } else {
      double v;
      in >> v;
      if (ue) {
        if (key == "q_local") ue->q_local = v;
        else if (key == "q_offload") ue->q_offload = v;
        else if (key == "vq_local_excess_mean") ue->vq_local_excess_mean = v;
        else if (key == "vq_local_excess_sq") ue->vq_local_excess_sq = v;
        else if (key == "vq_offload_excess_mean") ue->vq_offload_excess_mean = v;
        else if (key == "vq_offload_excess_sq") ue->vq_offload_excess_sq = v;
        else if (key == "vq_local_violation") ue->vq_local_violation = v;
        else if (key == "vq_offload_violation") ue->vq_offload_violation = v;
        else if (key == "avg_arrival_local") ue->avg_arrival_local.mean = v;
        else if (key == "avg_arrival_local_n") ue->avg_arrival_local.count = static_cast<std::uint64_t>(v);
        else if (key == "avg_arrival_offload") ue->avg_arrival_offload.mean = v;
        else if (key == "avg_arrival_offload_n") ue->avg_arrival_offload.count = static_cast<std::uint64_t>(v);
        else throw std::runtime_error("snapshot_restore: unknown ue key '" + key + "'");
      } else if (pr) {
        if (key == "backlog") pr->backlog = v;
        else if (key == "vq_excess_mean") pr->vq_excess_mean = v;
        else if (key == "vq_excess_sq") pr->vq_excess_sq = v;
        else if (key == "vq_violation") pr->vq_violation = v;
        else if (key == "avg_rate") pr->avg_rate.mean = v;
        else if (key == "avg_rate_n") pr->avg_rate.count = static_cast<std::uint64_t>(v);
        else throw std::runtime_error("snapshot_restore: unknown pair key '" + key + "'");
      } else {
        throw std::runtime_error("snapshot_restore: value before any entity: '" + key + "'");
      }
    }
  }
}

}  // namespace mecsim
