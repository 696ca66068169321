#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mecsim::matching {

// UE-server assignment. Every UE is matched to exactly one server; servers
// have no capacity cap beyond the number of UEs.
struct Matching {
  std::vector<int> server_of;  // per UE
  bool converged = true;       // false when the swap cap was hit
  int swaps = 0;

  std::vector<std::vector<int>> ues_of(std::size_t num_servers) const;
};

// Frame-level inputs: mean channel gains and the empirical weight estimates.
struct MatchingInputs {
  std::vector<std::vector<double>> mean_gains;  // [ue][server]
  std::vector<double> beta_offload_est;         // per UE
  std::vector<double> beta_server_est;          // per server
  std::vector<double> p_max_w;                  // per UE
  double noise_w = 0.0;

  std::size_t num_ues() const { return mean_gains.size(); }
  std::size_t num_servers() const { return mean_gains.empty() ? 0 : mean_gains[0].size(); }
};

// Utility of UE i under `assign`: (est_i - est_j) * log2(1 + SINR) with full
// power, mean gains, and interference from the co-associated UEs.
double ue_utility(std::size_t i, std::span<const int> assign, const MatchingInputs& in);
// Server utility: sum of its associated UEs' utilities.
double server_utility(std::size_t j, std::span<const int> assign, const MatchingInputs& in);
// Objective of the frame-level association problem, sum of all UE utilities.
double association_objective(std::span<const int> assign, const MatchingInputs& in);

// A candidate exchange: UE i (on server j) swaps with UE `other` (on server
// other_server), or moves to an open spot when other < 0.
struct SwapCandidate {
  int ue = -1;
  int other = -1;  // -1: open spot
  int server = -1;
  int other_server = -1;
};

// First swap-blocking pair in the deterministic scan order (UE pairs in
// lexicographic order, then (UE, open spot) ordered by (UE, server)), or
// nullopt when the matching is two-sided exchange-stable.
std::optional<SwapCandidate> find_swap_blocking_pair(std::span<const int> assign,
                                                     const MatchingInputs& in);

// Highest-mean-gain association (also Algorithm 1's starting point).
Matching rss_association(const MatchingInputs& in);

// Swap-matching iteration until exchange stability or the swap cap
// (default 50 U^2) is exceeded, in which case `converged` is false.
Matching run_matching(const MatchingInputs& in, std::int64_t max_swaps = -1);

// Exhaustive search over all S^U assignments; refuses instances with more
// than `cap` candidates. Returns the maximizer and its objective.
struct BruteForceResult {
  Matching matching;
  double objective = 0.0;
};
BruteForceResult brute_force_association(const MatchingInputs& in,
                                         std::uint64_t cap = 1000000);

// Accumulates the per-slot weights that the frame-level estimates average:
// est_offload(n) over all past slots, est_server(n) over the per-slot mean of
// the weights of the currently associated UEs.
class WeightEstimator {
 public:
  WeightEstimator() = default;
  WeightEstimator(std::size_t num_ues, std::size_t num_servers)
      : sum_offload_(num_ues, 0.0), sum_server_(num_servers, 0.0) {}

  void record_slot(std::span<const double> beta_offload,
                   const std::vector<std::vector<double>>& beta_server,
                   std::span<const int> assign);

  // Cold start (no recorded slots) yields all-zero estimates.
  std::vector<double> offload_estimates() const;
  std::vector<double> server_estimates() const;
  std::uint64_t slots() const { return slots_; }

 private:
  std::vector<double> sum_offload_;
  std::vector<double> sum_server_;
  std::uint64_t slots_ = 0;
};

}  // namespace mecsim::matching
