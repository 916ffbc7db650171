#pragma once

#include <span>
#include <vector>

#include "ocsmatch/gain_table.h"
#include "ocsmatch/instance.h"
#include "ocsmatch/ocs.h"
#include "ocsmatch/round.h"
#include "ocsmatch/step_function.h"

namespace ocsmatch {

/// Per weight-level bookkeeping of one offline vertex: randomized-round count
/// k(w), offline dual alpha(w) and surrogate CCDF ybar(w).
struct DualLevel {
  ExtendedCount k = 0;
  double alpha = 0.0;
  double ybar = 0.0;
};

struct OfflineDualState {
  StepFunction<DualLevel> levels;
  double last_randomized_weight = 0.0;  // 0 before any randomized round

  ExtendedCount k_at(double w) const { return levels.at(w).k; }
  double alpha_at(double w) const { return levels.at(w).alpha; }
  double ybar_at(double w) const { return levels.at(w).ybar; }
  double alpha_integral() const;
  double ybar_integral() const;
};

/// Online-dual gain of a randomized round offering vertex `state` at edge
/// weight w:  int_0^w b(k(v)) dv - 1/2 int_w^inf sum_{l<k(v)} a(l) dv.
double delta_r(const OfflineDualState& state, double w, const GainTable& table);

/// Online-dual gain of a deterministic round: kappa * delta_r.
double delta_d(const OfflineDualState& state, double w, const GainTable& table);

/// Edge-weighted online matching with free disposal. Each arrival becomes a
/// randomized round (two candidates resolved by the selector), a
/// deterministic round, or is left unmatched, chosen by comparing the online
/// dual gains. Offline duals, k(w) and ybar(w) are maintained exactly as step
/// functions over the observed edge weights.
class EdgeWeightedEngine {
 public:
  EdgeWeightedEngine(int n_offline, GainTable table);

  /// Processes the next online vertex. Offline vertices absent from `edges`
  /// have weight zero.
  RoundOutcome arrive(std::span<const Edge> edges, Selector& selector);
  RoundOutcome arrive_dense(std::span<const double> weights, Selector& selector);

  /// Alpha invariant, ybar lower bound and monotonicity at every breakpoint,
  /// reverse weak duality D <= Pbar, and approximate dual feasibility for
  /// every offline vertex against every arrived online vertex.
  InvariantReport check_invariants() const;

  /// Realized objective: sum over offline vertices of the heaviest edge
  /// matched to them in this run.
  double algorithm_value() const;
  double surrogate_primal() const;
  double dual_objective() const;

  int n_offline() const { return static_cast<int>(offline_.size()); }
  int n_arrived() const { return static_cast<int>(weights_.size()); }
  const GainTable& table() const { return table_; }
  const OfflineDualState& offline_state(int i) const { return offline_.at(i); }
  double beta(int j) const { return betas_.at(j); }
  const std::vector<TranscriptRecord>& transcript() const { return transcript_; }

  /// Direct state access for fault-injection tests.
  OfflineDualState& mutable_offline_state_for_testing(int i) {
    return offline_.at(i);
  }

 private:
  void apply_randomized(int i, double w);
  void apply_deterministic(int i, double w);

  GainTable table_;
  std::vector<OfflineDualState> offline_;
  std::vector<double> heaviest_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> betas_;
  std::vector<TranscriptRecord> transcript_;
};

/// Runs the engine over a whole instance.
EdgeWeightedEngine run_edge_weighted(const Instance& instance,
                                     const GainTable& table,
                                     Selector& selector);

}  // namespace ocsmatch
