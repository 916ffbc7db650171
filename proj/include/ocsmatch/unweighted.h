#pragma once

#include <span>
#include <vector>

#include "ocsmatch/gain_table.h"
#include "ocsmatch/instance.h"
#include "ocsmatch/ocs.h"
#include "ocsmatch/round.h"
#include "ocsmatch/step_function.h"

namespace ocsmatch {

/// Which attainers of the minimum count become candidates.
enum class TieBreak { kSmallestId, kReverseLex };

TieBreak parse_tie_break(const std::string& text);
const char* tie_break_name(TieBreak tie_break);

/// Two-choice greedy for unweighted matching: candidates are the neighbors
/// chosen in the fewest randomized rounds and in no deterministic round.
class UnweightedEngine {
 public:
  struct OfflineState {
    ExtendedCount k = 0;
    double xbar = 0.0;  // 1 - 2^-k r_k, or 1 once deterministically matched
    double alpha = 0.0;
  };

  UnweightedEngine(int n_offline, UnweightedDualTable table,
                   TieBreak tie_break = TieBreak::kSmallestId);

  RoundOutcome arrive(std::span<const int> neighbors, Selector& selector);

  /// D <= Pbar, alpha_i + beta_j >= Gamma on every arrived edge, alpha and
  /// xbar recomputed from k without drift, and beta_j consistent with the
  /// round that produced it.
  InvariantReport check_invariants() const;

  double algorithm_value() const;
  double surrogate_primal() const;
  double dual_objective() const;

  int n_offline() const { return static_cast<int>(offline_.size()); }
  int n_arrived() const { return static_cast<int>(neighbors_.size()); }
  const UnweightedDualTable& table() const { return table_; }
  const OfflineState& offline_state(int i) const { return offline_.at(i); }
  double beta(int j) const { return betas_.at(j); }
  const std::vector<TranscriptRecord>& transcript() const { return transcript_; }
  bool matched(int i) const { return matched_.at(i); }

  OfflineState& mutable_offline_state_for_testing(int i) {
    return offline_.at(i);
  }

 private:
  UnweightedDualTable table_;
  TieBreak tie_break_;
  std::vector<OfflineState> offline_;
  std::vector<bool> matched_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<double> betas_;
  std::vector<ExtendedCount> beta_level_;  // k with beta_j = 2 dbeta(k)
  std::vector<TranscriptRecord> transcript_;
  double pbar_ = 0.0;
  double dual_ = 0.0;
};

/// Neighbor lists of an unweighted instance (edges of weight 1). Throws
/// std::invalid_argument when any edge weight is not 0 or 1.
std::vector<std::vector<int>> unweighted_neighbors(const Instance& instance);

UnweightedEngine run_unweighted(const Instance& instance,
                                const UnweightedDualTable& table,
                                Selector& selector,
                                TieBreak tie_break = TieBreak::kSmallestId);

/// Fractional run of the two-choice greedy under perfect negative
/// correlation: a candidate gains 1/2 per randomized round and is full after
/// two. Returns the total matched mass.
double perfect_correlation_sim(const Instance& instance,
                               TieBreak tie_break = TieBreak::kReverseLex);

}  // namespace ocsmatch
