#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ocsmatch/engine.h"
#include "ocsmatch/instance.h"
#include "ocsmatch/ocs.h"

namespace ocsmatch {

/// Maximum-weight matching value, which equals the free-disposal optimum.
/// Instances whose positive weights are all equal go through Hopcroft-Karp;
/// the rest through the Hungarian method with potentials.
double offline_optimum(const Instance& instance);

/// Exhaustive search over matchings; for cross-checking on tiny instances.
double brute_force_optimum(const Instance& instance);

/// Maximum cardinality matching; neighbors[j] lists the offline ids of
/// online vertex j.
int hopcroft_karp(int n_offline, const std::vector<std::vector<int>>& neighbors);

/// Maximum-weight matching on a dense online x offline weight matrix.
double hungarian_max_weight(const std::vector<std::vector<double>>& weights,
                            int n_offline);

inline constexpr int kExactPairLimit = 8;

/// One realization of a selector run: bit t of `choices` is set iff pair t
/// selected its second element.
struct SelectionOutcome {
  std::uint64_t choices = 0;
  double probability = 0.0;
};

/// Exact distribution of the selections over all of the selector's random
/// draws, each draw a branch with its probability. Throws std::length_error
/// beyond `max_pairs` pairs (at most 63) and std::invalid_argument on a
/// degenerate pair.
std::vector<SelectionOutcome> exact_selection_distribution(
    const SelectorKind& kind, std::span<const Pair> pairs,
    int max_pairs = kExactPairLimit);

/// Probability that `element` is selected in none of the indexed pairs.
double never_selected(std::span<const SelectionOutcome> distribution,
                      std::span<const Pair> pairs, Element element,
                      std::span<const std::size_t> indices);

double exact_never_selected(const SelectorKind& kind,
                            std::span<const Pair> pairs, Element element,
                            std::span<const std::size_t> indices);

struct ExactValue {
  double expected = 0.0;
  double pbar = 0.0;  // surrogate primal reported by the engine
  int randomized_rounds = 0;
};

/// Exact expected objective of the engine, enumerating the selector over
/// the engine's (seed-independent) randomized rounds. Throws
/// std::length_error beyond `max_rounds` randomized rounds.
ExactValue exact_algorithm_value(const Instance& instance,
                                 const EngineSpec& engine,
                                 const SelectorKind& selector,
                                 int max_rounds = kExactPairLimit);

}  // namespace ocsmatch
