#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocsmatch/gain_table.h"
#include "ocsmatch/instance.h"
#include "ocsmatch/ocs.h"
#include "ocsmatch/round.h"
#include "ocsmatch/unweighted.h"

namespace ocsmatch {

/// Which matching algorithm an experiment or oracle query runs.
struct EngineSpec {
  enum class Kind {
    kEdgeWeighted,
    kUnweighted,
    kPerfectCorrelation,  // fractional, selector-free
    kIndependentGreedy,   // unweighted greedy, fresh fair bit per round
  };

  Kind kind = Kind::kEdgeWeighted;
  GainTable gain = GainTable::table_1b();
  UnweightedDualTable dual = UnweightedDualTable::table_3();
  std::optional<TieBreak> tie_break;

  /// Explicit choice, else reverse-lexicographic for the two hard-instance
  /// thought experiments and smallest id for the unweighted greedy.
  TieBreak resolved_tie_break() const;

  std::string name() const;
  /// "edge_weighted", "unweighted", "perfect_correlation" or
  /// "independent_greedy"; tables keep their defaults.
  static Kind parse_kind(const std::string& text);
  bool uses_selector() const { return kind != Kind::kPerfectCorrelation; }
  /// The independent greedy ignores the requested selector.
  SelectorKind effective_selector(const SelectorKind& requested) const;
};

struct EngineRun {
  std::vector<TranscriptRecord> transcript;
  double value = 0.0;
  double pbar = 0.0;
  double dual = 0.0;
  InvariantReport report;  // filled only when checks were requested
};

/// Runs one engine over the instance. With `check_invariants` the checker
/// runs after every arrival and the first failing report is kept.
/// Throws std::invalid_argument when the engine cannot take the instance
/// (weighted edges for the unweighted engines).
EngineRun run_engine(const Instance& instance, const EngineSpec& spec,
                     Selector& selector, bool check_invariants = false);

}  // namespace ocsmatch
