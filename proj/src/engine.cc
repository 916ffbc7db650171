#include "ocsmatch/engine.h"

#include <stdexcept>

#include "ocsmatch/primal_dual.h"

namespace ocsmatch {

std::string EngineSpec::name() const {
  switch (kind) {
    case Kind::kEdgeWeighted: return "edge_weighted";
    case Kind::kUnweighted: return "unweighted";
    case Kind::kPerfectCorrelation: return "perfect_correlation";
    case Kind::kIndependentGreedy: return "independent_greedy";
  }
  return "?";
}

EngineSpec::Kind EngineSpec::parse_kind(const std::string& text) {
  if (text == "edge_weighted") return Kind::kEdgeWeighted;
  if (text == "unweighted") return Kind::kUnweighted;
  if (text == "perfect_correlation") return Kind::kPerfectCorrelation;
  if (text == "independent_greedy") return Kind::kIndependentGreedy;
  throw std::invalid_argument("unknown engine '" + text + "'");
}

TieBreak EngineSpec::resolved_tie_break() const {
  if (tie_break) return *tie_break;
  return kind == Kind::kUnweighted ? TieBreak::kSmallestId
                                   : TieBreak::kReverseLex;
}

SelectorKind EngineSpec::effective_selector(const SelectorKind& requested) const {
  return kind == Kind::kIndependentGreedy ? SelectorKind::independent()
                                          : requested;
}

EngineRun run_engine(const Instance& instance, const EngineSpec& spec,
                     Selector& selector, bool check_invariants) {
  EngineRun run;
  switch (spec.kind) {
    case EngineSpec::Kind::kEdgeWeighted: {
      EdgeWeightedEngine engine(instance.n_offline, spec.gain);
      for (const auto& arrival : instance.arrivals) {
        engine.arrive(arrival, selector);
        if (check_invariants && run.report.ok()) {
          run.report = engine.check_invariants();
        }
      }
      run.transcript = engine.transcript();
      run.value = engine.algorithm_value();
      run.pbar = engine.surrogate_primal();
      run.dual = engine.dual_objective();
      break;
    }
    case EngineSpec::Kind::kUnweighted:
    case EngineSpec::Kind::kIndependentGreedy: {
      if (spec.kind == EngineSpec::Kind::kIndependentGreedy &&
          selector.kind().type != SelectorKind::Type::kIndependent) {
        throw std::invalid_argument(
            "independent_greedy needs an independent selector");
      }
      UnweightedEngine engine(instance.n_offline, spec.dual, spec.resolved_tie_break());
      for (const auto& ids : unweighted_neighbors(instance)) {
        engine.arrive(ids, selector);
        if (check_invariants && run.report.ok()) {
          run.report = engine.check_invariants();
        }
      }
      run.transcript = engine.transcript();
      run.value = engine.algorithm_value();
      run.pbar = engine.surrogate_primal();
      run.dual = engine.dual_objective();
      break;
    }
    case EngineSpec::Kind::kPerfectCorrelation:
      run.value = perfect_correlation_sim(instance, spec.resolved_tie_break());
      run.pbar = run.value;
      break;
  }
  return run;
}

}  // namespace ocsmatch
