#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mecsim/channel.hpp"
#include "mecsim/config.hpp"
#include "mecsim/queues.hpp"
#include "mecsim/rng.hpp"

namespace mecsim {

// Two-timescale clock: slots t grouped into frames of T_0 slots.
// Frame index n = floor(t / T_0) + 1; t is a boundary iff t mod T_0 == 0.
struct Clock {
  std::int64_t slot = 0;
  int frame_slots = 1;

  std::int64_t frame() const { return slot / frame_slots + 1; }
  bool is_frame_boundary() const { return slot % frame_slots == 0; }
};

inline Clock advance_clock(Clock c) {
  ++c.slot;
  return c;
}

// RNG stream ids; decisions never consume randomness, so trajectories of the
// exogenous processes depend only on (seed, stream, draw order).
inline constexpr std::uint64_t kStreamPositions = 1;
inline constexpr std::uint64_t kStreamArrivals = 2;
inline constexpr std::uint64_t kStreamFading = 3;

struct NetworkState {
  SimConfig cfg;
  std::vector<Point> server_positions;
  std::vector<Point> ue_positions;
  std::vector<std::vector<double>> mean_gains;  // [ue][server], linear
  Clock clock;

  std::vector<queues::UeQueues> ue;                          // [ue]
  std::vector<std::vector<queues::ServerPairQueues>> pair;   // [server][ue]
  std::vector<std::vector<channel::InterferenceHistogram>> hist;  // [ue][server]

  RngStream position_rng;  // continued by the per-frame mobility refresh

  std::size_t num_ues() const { return ue.size(); }
  std::size_t num_servers() const { return pair.size(); }
};

// Validates the config and returns a fully initialized state with every
// physical and virtual queue at zero. Missing UE positions are sampled
// uniformly from the area; missing server positions default to the quadrant
// centers for four servers and are sampled otherwise.
NetworkState build_network(const SimConfig& cfg);

// Re-samples every UE position uniformly and recomputes mean gains
// (refresh_per_frame mobility).
void refresh_ue_positions(NetworkState& state);

void recompute_mean_gains(NetworkState& state);

// Text serialization of the clock and every queue value, for test fixtures.
std::string snapshot_text(const NetworkState& state);
// Restores queue values from snapshot_text output into a state of matching
// dimensions.
void snapshot_restore(NetworkState& state, const std::string& text);

}  // namespace mecsim
