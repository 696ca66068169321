#include "mecsim/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecsim::matching {

namespace {

// Received signal strength of UE i at server j under full power.
double rss(std::size_t i, std::size_t j, const MatchingInputs& in) {
  return in.p_max_w[i] * in.mean_gains[i][j];
}

// Sum of full-power mean received strengths of the UEs on server j, in UE
// index order so scans and oracles agree bitwise.
double server_aggregate(std::size_t j, std::span<const int> assign,
                        const MatchingInputs& in) {
  double agg = 0.0;
  for (std::size_t k = 0; k < assign.size(); ++k)
    if (assign[k] == static_cast<int>(j)) agg += rss(k, j, in);
  return agg;
}

double utility_term(std::size_t i, std::size_t j, double agg_j, const MatchingInputs& in) {
  const double s = rss(i, j, in);
  const double w = in.beta_offload_est[i] - in.beta_server_est[j];
  return w * std::log2(1.0 + s / (in.noise_w + agg_j - s));
}

struct Utilities {
  std::vector<double> ue;      // per UE
  std::vector<double> server;  // per server
};

Utilities all_utilities(std::span<const int> assign, const MatchingInputs& in) {
  Utilities u;
  u.ue.assign(in.num_ues(), 0.0);
  u.server.assign(in.num_servers(), 0.0);
  std::vector<double> agg(in.num_servers());
  for (std::size_t j = 0; j < in.num_servers(); ++j)
    agg[j] = server_aggregate(j, assign, in);
  for (std::size_t i = 0; i < in.num_ues(); ++i) {
    const auto j = static_cast<std::size_t>(assign[i]);
    u.ue[i] = utility_term(i, j, agg[j], in);
    u.server[j] += u.ue[i];
  }
  return u;
}

}  // namespace

std::vector<std::vector<int>> Matching::ues_of(std::size_t num_servers) const {
  std::vector<std::vector<int>> by_server(num_servers);
  for (std::size_t i = 0; i < server_of.size(); ++i)
    by_server[static_cast<std::size_t>(server_of[i])].push_back(static_cast<int>(i));
  return by_server;
}

double ue_utility(std::size_t i, std::span<const int> assign, const MatchingInputs& in) {
  const auto j = static_cast<std::size_t>(assign[i]);
  return utility_term(i, j, server_aggregate(j, assign, in), in);
}

double server_utility(std::size_t j, std::span<const int> assign, const MatchingInputs& in) {
  const double agg = server_aggregate(j, assign, in);
  double sum = 0.0;
  for (std::size_t i = 0; i < assign.size(); ++i)
    if (assign[i] == static_cast<int>(j)) sum += utility_term(i, j, agg, in);
  return sum;
}

double association_objective(std::span<const int> assign, const MatchingInputs& in) {
  double sum = 0.0;
  for (std::size_t j = 0; j < in.num_servers(); ++j) sum += server_utility(j, assign, in);
  return sum;
}

std::optional<SwapCandidate> find_swap_blocking_pair(std::span<const int> assign,
                                                     const MatchingInputs& in) {
  const Utilities cur = all_utilities(assign, in);
  std::vector<std::vector<int>> members(in.num_servers());
  for (std::size_t i = 0; i < assign.size(); ++i)
    members[static_cast<std::size_t>(assign[i])].push_back(static_cast<int>(i));

  // Post-swap membership of server j: members[j] with `out` removed and `add`
  // inserted at its index position, so summation order matches a fresh scan.
  const auto for_each_member = [&](std::size_t j, int out, int add, auto&& fn) {
    bool added = add < 0;
    for (int k : members[j]) {
      if (!added && add < k) {
        fn(add);
        added = true;
      }
      if (k == out) continue;
      fn(k);
    }
    if (!added) fn(add);
  };
  const auto agg_after = [&](std::size_t j, int out, int add) {
    double agg = 0.0;
    for_each_member(j, out, add, [&](int k) { agg += rss(static_cast<std::size_t>(k), j, in); });
    return agg;
  };
  const auto server_after = [&](std::size_t j, int out, int add, double agg) {
    double sum = 0.0;
    for_each_member(j, out, add,
                    [&](int k) { sum += utility_term(static_cast<std::size_t>(k), j, agg, in); });
    return sum;
  };

  // Rejects cheaply on the first strictly-worse party.
  const auto is_blocking = [&](const SwapCandidate& c) {
    const auto j = static_cast<std::size_t>(c.server);
    const auto j2 = static_cast<std::size_t>(c.other_server);
    const double agg_j = agg_after(j, c.ue, c.other);
    const double agg_j2 = agg_after(j2, c.other, c.ue);

    const double ue_after = utility_term(static_cast<std::size_t>(c.ue), j2, agg_j2, in);
    const double ue_before = cur.ue[static_cast<std::size_t>(c.ue)];
    if (ue_after < ue_before) return false;
    double other_after = 0.0, other_before = 0.0;
    if (c.other >= 0) {
      other_after = utility_term(static_cast<std::size_t>(c.other), j, agg_j, in);
      other_before = cur.ue[static_cast<std::size_t>(c.other)];
      if (other_after < other_before) return false;
    }
    const double srv2_after = server_after(j2, c.other, c.ue, agg_j2);
    if (srv2_after < cur.server[j2]) return false;
    const double srv_after = server_after(j, c.ue, c.other, agg_j);
    if (srv_after < cur.server[j]) return false;

    return ue_after > ue_before || other_after > other_before ||
           srv_after > cur.server[j] || srv2_after > cur.server[j2];
  };

  const auto num_ues = static_cast<int>(in.num_ues());
  const auto num_servers = static_cast<int>(in.num_servers());
  for (int i = 0; i < num_ues; ++i)
    for (int i2 = i + 1; i2 < num_ues; ++i2) {
      if (assign[static_cast<std::size_t>(i)] == assign[static_cast<std::size_t>(i2)]) continue;
      SwapCandidate c{i, i2, assign[static_cast<std::size_t>(i)],
                      assign[static_cast<std::size_t>(i2)]};
      if (is_blocking(c)) return c;
    }
  for (int i = 0; i < num_ues; ++i)
    for (int j2 = 0; j2 < num_servers; ++j2) {
      if (assign[static_cast<std::size_t>(i)] == j2) continue;
      SwapCandidate c{i, -1, assign[static_cast<std::size_t>(i)], j2};
      if (is_blocking(c)) return c;
    }
  return std::nullopt;
}

Matching rss_association(const MatchingInputs& in) {
  Matching m;
  m.server_of.resize(in.num_ues());
  for (std::size_t i = 0; i < in.num_ues(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < in.num_servers(); ++j)
      if (in.mean_gains[i][j] > in.mean_gains[i][best]) best = j;
    m.server_of[i] = static_cast<int>(best);
  }
  return m;
}

Matching run_matching(const MatchingInputs& in, std::int64_t max_swaps) {
  Matching m = rss_association(in);
  const auto u = static_cast<std::int64_t>(in.num_ues());
  if (max_swaps < 0) max_swaps = 50 * u * u;
  m.converged = false;
  while (m.swaps < max_swaps) {
    const auto cand = find_swap_blocking_pair(m.server_of, in);
    if (!cand) {
      m.converged = true;
      break;
    }
    m.server_of[static_cast<std::size_t>(cand->ue)] = cand->other_server;
    if (cand->other >= 0)
      m.server_of[static_cast<std::size_t>(cand->other)] = cand->server;
    ++m.swaps;
  }
  // The cap may land exactly on a stable state.
  if (!m.converged && !find_swap_blocking_pair(m.server_of, in)) m.converged = true;
  return m;
}

BruteForceResult brute_force_association(const MatchingInputs& in, std::uint64_t cap) {
  const std::size_t num_ues = in.num_ues();
  const std::size_t num_servers = in.num_servers();
  double combos = 1.0;
  for (std::size_t i = 0; i < num_ues; ++i) combos *= static_cast<double>(num_servers);
  if (combos > static_cast<double>(cap))
    throw std::runtime_error("brute_force_association: instance too large (" +
                             std::to_string(combos) + " candidates)");

  std::vector<int> assign(num_ues, 0);
  BruteForceResult best;
  best.matching.server_of = assign;
  best.objective = association_objective(assign, in);
  while (true) {
    // odometer increment, last UE fastest
    std::size_t pos = num_ues;
    while (pos > 0) {
      --pos;
      if (++assign[pos] < static_cast<int>(num_servers)) break;
      assign[pos] = 0;
      if (pos == 0) return best;
    }
    const double obj = association_objective(assign, in);
    if (obj > best.objective) {
      best.objective = obj;
      best.matching.server_of = assign;
    }
  }
}

void WeightEstimator::record_slot(std::span<const double> beta_offload,
                                  const std::vector<std::vector<double>>& beta_server,
                                  std::span<const int> assign) {
  for (std::size_t i = 0; i < sum_offload_.size(); ++i) sum_offload_[i] += beta_offload[i];
  for (std::size_t j = 0; j < sum_server_.size(); ++j) {
    double sum = 0.0;
    std::size_t members = 0;
    for (std::size_t i = 0; i < sum_offload_.size(); ++i) {
      if (assign[i] != static_cast<int>(j)) continue;
      sum += beta_server[j][i];
      ++members;
    }
    if (members > 0) sum_server_[j] += sum / static_cast<double>(members);
  }
  ++slots_;
}

std::vector<double> WeightEstimator::offload_estimates() const {
  std::vector<double> est(sum_offload_.size(), 0.0);
  if (slots_ == 0) return est;
  for (std::size_t i = 0; i < est.size(); ++i)
    est[i] = sum_offload_[i] / static_cast<double>(slots_);
  return est;
}

std::vector<double> WeightEstimator::server_estimates() const {
  std::vector<double> est(sum_server_.size(), 0.0);
  if (slots_ == 0) return est;
  for (std::size_t j = 0; j < est.size(); ++j)
    est[j] = sum_server_[j] / static_cast<double>(slots_);
  return est;
}

}  // namespace mecsim::matching
